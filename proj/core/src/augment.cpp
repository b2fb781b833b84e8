#include "mrlmc/augment.hpp"

#include <algorithm>
#include <cmath>

namespace mrlmc {

void AugmentSpec::validate(const TaskMeta& task) const {
    task.validate();
    double lambda = lambda_s == 0.0 ? task.t_q : lambda_s;
    if (lambda <= 0.0 || lambda > task.t_q + 1e-12)
        throw ValidationError("augment: lambda_s must be in (0, t_q]");
    if (warp_lo <= 0.0 || warp_lo > warp_hi)
        throw ValidationError("augment: warp_factor_range requires 0 < lo <= hi");
    if (probability < 0.0 || probability > 1.0)
        throw ValidationError("augment: probability must be in [0, 1]");
}

WindowDraw draw_window(const TaskMeta& task, const AugmentSpec& spec, Rng& rng) {
    const double lambda = spec.lambda_s == 0.0 ? task.t_q : spec.lambda_s;
    WindowDraw d;
    d.question = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(task.question_count)));
    // width in (0, lambda], then offset so the segment fits inside the question
    d.width = (1.0 - rng.uniform()) * lambda;
    d.t0 = rng.uniform(0.0, std::max(0.0, task.t_q - d.width));
    d.warp_factor = rng.uniform(spec.warp_lo, spec.warp_hi);
    return d;
}

Signal time_mask(const Signal& signal, const TaskMeta& task, const AugmentSpec& spec,
                 Rng& rng) {
    spec.validate(task);
    if (signal.duration_s() + 1e-9 < task.t_q)
        throw ValidationError("augment: signal shorter than one question window");

    WindowDraw d = draw_window(task, spec, rng);
    const double start_s = d.question * task.t_q + d.t0;
    auto start = static_cast<std::size_t>(std::llround(start_s * signal.fs));
    auto len = static_cast<std::size_t>(std::llround(d.width * signal.fs));
    start = std::min(start, signal.timesteps);
    len = std::min(len, signal.timesteps - start);

    Signal out = signal;
    if (len == 0) return out;
    for (std::size_t c = 0; c < signal.channels; ++c) {
        double sum = 0.0;
        for (std::size_t t = 0; t < signal.timesteps; ++t)
            if (t < start || t >= start + len) sum += signal.at(c, t);
        const double mean = signal.timesteps > len
                                ? sum / static_cast<double>(signal.timesteps - len)
                                : 0.0;
        for (std::size_t t = start; t < start + len; ++t) out.at(c, t) = mean;
    }
    return out;
}

std::vector<double> warp_time_map(std::size_t timesteps, std::size_t w_start,
                                  std::size_t w_len, double factor) {
    const auto t_len = static_cast<double>(timesteps);
    const auto stretched = static_cast<double>(
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                     static_cast<double>(w_len) * factor))));
    const double inter_len = t_len - static_cast<double>(w_len) + stretched;
    const double s0 = static_cast<double>(w_start);

    std::vector<double> map(timesteps);
    for (std::size_t i = 0; i < timesteps; ++i) {
        // output index -> intermediate position -> input position
        const double p = timesteps > 1
                             ? static_cast<double>(i) * (inter_len - 1.0) / (t_len - 1.0)
                             : 0.0;
        double x;
        if (p < s0)
            x = p;
        else if (p < s0 + stretched)
            x = s0 + (p - s0) * static_cast<double>(w_len) / stretched;
        else
            x = p - stretched + static_cast<double>(w_len);
        map[i] = std::clamp(x, 0.0, t_len - 1.0);
    }
    return map;
}

Signal time_warp(const Signal& signal, const TaskMeta& task, const AugmentSpec& spec,
                 Rng& rng) {
    spec.validate(task);
    WindowDraw d = draw_window(task, spec, rng);
    const double start_s = d.question * task.t_q + d.t0;
    auto start = static_cast<std::size_t>(std::llround(start_s * signal.fs));
    auto len = static_cast<std::size_t>(std::llround(d.width * signal.fs));
    start = std::min(start, signal.timesteps - 1);
    len = std::max<std::size_t>(1, std::min(len, signal.timesteps - start));

    auto map = warp_time_map(signal.timesteps, start, len, d.warp_factor);
    Signal out = signal;
    for (std::size_t c = 0; c < signal.channels; ++c) {
        for (std::size_t i = 0; i < signal.timesteps; ++i) {
            const double x = map[i];
            const auto lo = static_cast<std::size_t>(std::floor(x));
            const std::size_t hi = std::min(lo + 1, signal.timesteps - 1);
            const double frac = x - static_cast<double>(lo);
            out.at(c, i) = (1.0 - frac) * signal.at(c, lo) + frac * signal.at(c, hi);
        }
    }
    return out;
}

std::string to_string(InputMode m) {
    switch (m) {
        case InputMode::SINGLE_FNIRS: return "SINGLE_FNIRS";
        case InputMode::SINGLE_EEG: return "SINGLE_EEG";
        default: return "MULTI";
    }
}

InputMode input_mode_from_string(const std::string& s) {
    if (s == "SINGLE_FNIRS") return InputMode::SINGLE_FNIRS;
    if (s == "SINGLE_EEG") return InputMode::SINGLE_EEG;
    if (s == "MULTI") return InputMode::MULTI;
    throw ValidationError("unknown input mode: " + s);
}

namespace {

Signal apply_augment(const Signal& s, const TaskMeta& task, const AugmentSpec& spec,
                     Rng& rng) {
    return spec.method == AugmentMethod::MASK ? time_mask(s, task, spec, rng)
                                              : time_warp(s, task, spec, rng);
}

} // namespace

std::vector<InputPair> build_input_pairs(const std::vector<Record>& records,
                                         InputMode mode, const AugmentSpec& spec) {
    std::vector<InputPair> pairs;
    pairs.reserve(records.size());

    for (std::size_t i = 0; i < records.size(); ++i) {
        const Record& rec = records[i];
        Rng rng(Rng::derive(spec.seed, i));

        InputPair p;
        p.label = rec.label;
        p.subject_id = rec.subject_id;

        if (mode == InputMode::MULTI) {
            p.x = rec.signal(Modality::FNIRS);
            p.y = rec.signal(Modality::EEG);
            if (rng.uniform() < spec.probability)
                p.x = apply_augment(p.x, rec.task, spec, rng);
            if (rng.uniform() < spec.probability)
                p.y = apply_augment(p.y, rec.task, spec, rng);
        } else {
            Modality m = mode == InputMode::SINGLE_FNIRS ? Modality::FNIRS : Modality::EEG;
            p.x = rec.signal(m);
            p.y = apply_augment(p.x, rec.task, spec, rng);
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

} // namespace mrlmc
