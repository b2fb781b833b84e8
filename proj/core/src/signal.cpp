#include "mrlmc/signal.hpp"

#include <cmath>

namespace mrlmc {

std::string to_string(Modality m) {
    return m == Modality::FNIRS ? "FNIRS" : "EEG";
}

Modality modality_from_string(const std::string& s) {
    if (s == "FNIRS") return Modality::FNIRS;
    if (s == "EEG") return Modality::EEG;
    throw ValidationError("unknown modality: " + s);
}

void Signal::validate(const std::string& context) const {
    if (fs <= 0.0) throw ValidationError(context + ": fs must be > 0");
    if (channels < 1) throw ValidationError(context + ": channels must be >= 1");
    if (timesteps < 1) throw ValidationError(context + ": timesteps must be >= 1");
    if (channel_ids.size() != channels)
        throw ValidationError(context + ": channel_ids length does not match channel count");
    if (data.size() != channels * timesteps)
        throw ValidationError(context + ": data size does not match channels x timesteps");
    for (double v : data)
        if (!std::isfinite(v)) throw ValidationError("corrupt signal: " + context);
}

void TaskMeta::validate() const {
    if (question_count < 1) throw ValidationError("task: question_count must be >= 1");
    if (t_q <= 0.0) throw ValidationError("task: t_q must be > 0");
    if (static_cast<double>(question_count) * t_q > total_duration + 1e-9)
        throw ValidationError("task: question_count * t_q exceeds total_duration");
}

const Signal& Record::signal(Modality m) const {
    auto it = signals.find(m);
    if (it == signals.end())
        throw ValidationError("record " + subject_id + ": missing modality " + to_string(m));
    return it->second;
}

void Record::validate() const {
    if (signals.empty())
        throw ValidationError("record " + subject_id + ": at least one modality required");
    task.validate();
    for (const auto& [m, s] : signals) {
        s.validate("record " + subject_id + " " + to_string(m));
        if (m != s.modality)
            throw ValidationError("record " + subject_id + ": modality key/field mismatch");
    }
}

} // namespace mrlmc
