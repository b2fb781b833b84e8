#pragma once

#include <filesystem>
#include <string>

#include "mrlmc/preprocess.hpp"
#include "mrlmc/synth.hpp"
#include "mrlmc/training.hpp"

namespace mrlmc {

struct PreprocessConfig {
    FilterSpec fnirs_band{0.01, 0.08, 1001};
    FilterSpec eeg_band{1.0, 40.0, 201};
    bool apply_bandpass = true;
    double fs_common = 100.0; // common post-resampling rate for fusion
    std::vector<std::string> fnirs_channels; // empty = keep all
    std::vector<std::string> eeg_channels;
    BeerLambertConstants beer_lambert;

    void validate() const;
};

/// The experiment file: JSON sections {data, preprocess, augment, model,
/// semantic, head, train}. Unknown keys are rejected; serializing always
/// materializes every default so run directories carry the full resolved
/// configuration.
struct ExperimentConfig {
    SynthSpec data;
    PreprocessConfig preprocess;
    TrainConfig train; // holds augment/model/semantic/head sub-configs

    void validate() const;
    std::string to_json() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

SynthSpec parse_synth_spec(const std::string& json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);
std::string synth_spec_to_json(const SynthSpec& spec);

} // namespace mrlmc
