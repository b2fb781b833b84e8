#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mrlmc/signal.hpp"

namespace mrlmc {

/// Parameters of the synthetic two-modality generator. Class information is
/// carried by the response amplitude: DEPRESSED subjects show an attenuated
/// task response, so a simple probe on task-window means separates the
/// classes and the dataset is learnable at desk scale.
struct SynthSpec {
    std::size_t n_records = 200;
    std::size_t fnirs_channels = 8;
    std::size_t eeg_channels = 8;
    double fnirs_fs = 10.0;
    double eeg_fs = 10.0;
    double duration_s = 10.0;
    int question_count = 2;
    double class_ratio = 0.2; // fraction DEPRESSED
    std::map<Label, double> activation_gain = {
        {Label::CONTROL, 1.0}, {Label::DEPRESSED, 0.4}};
    double noise_sd = 0.1;
    double kernel_peak_s = 6.0;  // unimodal response kernel peak
    double eeg_osc_hz = 10.0;    // clamped below Nyquist at generation time
    std::uint64_t seed = 0;

    void validate() const;
};

/// Smooth unimodal response kernel (difference of gamma-shaped humps, peak at
/// peak_s), sampled at fs. Normalized to unit peak.
std::vector<double> response_kernel(double peak_s, double fs);

/// Deterministic synthetic dataset; per-record randomness derives from
/// (seed, record index) only, so generation order and thread count never
/// change the output.
std::vector<Record> synth_dataset(const SynthSpec& spec);

} // namespace mrlmc
