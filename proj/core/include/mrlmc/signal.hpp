#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mrlmc/common.hpp"

namespace mrlmc {

enum class Modality { FNIRS, EEG };

std::string to_string(Modality m);
Modality modality_from_string(const std::string& s);

enum class Label : int { CONTROL = 0, DEPRESSED = 1 };

/// One modality's multichannel time series. Row-major channels x timesteps.
/// FNIRS carries HbO concentration change in umol/L, EEG potential in uV.
struct Signal {
    Modality modality = Modality::FNIRS;
    std::size_t channels = 0;
    std::size_t timesteps = 0;
    double fs = 0.0;
    std::vector<std::string> channel_ids;
    std::vector<double> data; // channels * timesteps, row-major

    double& at(std::size_t c, std::size_t t) { return data[c * timesteps + t]; }
    double at(std::size_t c, std::size_t t) const { return data[c * timesteps + t]; }

    double duration_s() const { return static_cast<double>(timesteps) / fs; }

    /// Throws ValidationError on any invariant breach (shape, finiteness, fs).
    void validate(const std::string& context = "signal") const;
};

/// Stimulation-task timing. Question windows are back-to-back starting at 0:
/// question k spans [k*t_q, (k+1)*t_q).
struct TaskMeta {
    double total_duration = 0.0; // seconds
    int question_count = 0;
    double t_q = 0.0; // seconds per question

    void validate() const;
};

/// A labeled subject: one or both modalities plus task metadata.
struct Record {
    std::string subject_id;
    Label label = Label::CONTROL;
    std::map<Modality, Signal> signals;
    TaskMeta task;

    bool has(Modality m) const { return signals.count(m) > 0; }
    const Signal& signal(Modality m) const;

    void validate() const;
};

} // namespace mrlmc
