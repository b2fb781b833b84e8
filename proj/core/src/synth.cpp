#include "mrlmc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mrlmc/rng.hpp"

namespace mrlmc {

void SynthSpec::validate() const {
    if (n_records < 1) throw ValidationError("synth: n_records must be >= 1");
    if (fnirs_channels < 1) throw ValidationError("synth: fnirs_channels must be >= 1");
    if (eeg_channels < 1) throw ValidationError("synth: eeg_channels must be >= 1");
    if (fnirs_fs <= 0.0) throw ValidationError("synth: fnirs_fs must be > 0");
    if (eeg_fs <= 0.0) throw ValidationError("synth: eeg_fs must be > 0");
    if (duration_s <= 0.0) throw ValidationError("synth: duration_s must be > 0");
    if (question_count < 1) throw ValidationError("synth: question_count must be >= 1");
    if (class_ratio <= 0.0 || class_ratio >= 1.0)
        throw ValidationError("synth: class_ratio must be in (0, 1)");
    if (noise_sd <= 0.0) throw ValidationError("synth: noise_sd must be > 0");
    if (kernel_peak_s <= 0.0) throw ValidationError("synth: kernel_peak_s must be > 0");
    auto c = activation_gain.find(Label::CONTROL);
    auto d = activation_gain.find(Label::DEPRESSED);
    if (c == activation_gain.end() || d == activation_gain.end())
        throw ValidationError("synth: activation_gain must cover both labels");
    if (c->second <= 0.0 || d->second <= 0.0)
        throw ValidationError("synth: activation_gain values must be positive");
    if (c->second == d->second)
        throw ValidationError("synth: activation_gain values must differ between labels");
}

std::vector<double> response_kernel(double peak_s, double fs) {
    // Gamma-shaped hump minus a delayed, smaller hump (hemodynamic-style).
    const double theta = peak_s / 5.0;
    const double len_s = 4.0 * peak_s;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len_s * fs)));
    // each hump is scaled to unit peak (reached at t = (k-1)*theta) so the
    // delayed undershoot stays a fraction of the main lobe
    auto hump = [theta](double t, double k) {
        if (t <= 0.0) return 0.0;
        const double t_peak = (k - 1.0) * theta;
        return std::pow(t / t_peak, k - 1.0) * std::exp((t_peak - t) / theta);
    };
    std::vector<double> kernel(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / fs;
        kernel[i] = hump(t, 6.0) - hump(t, 12.0) / 6.0;
        peak = std::max(peak, std::abs(kernel[i]));
    }
    if (peak > 0.0)
        for (auto& v : kernel) v /= peak;
    return kernel;
}

namespace {

// Active during the leading 60% of each question span.
double boxcar(double t, const TaskMeta& task) {
    if (t < 0.0 || t >= task.question_count * task.t_q) return 0.0;
    double phase = std::fmod(t, task.t_q);
    return phase < 0.6 * task.t_q ? 1.0 : 0.0;
}

std::vector<std::string> channel_names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s%02zu", prefix.c_str(), i + 1);
        ids[i] = buf;
    }
    return ids;
}

Signal make_fnirs(const SynthSpec& spec, const TaskMeta& task, double gain, Rng& rng) {
    Signal s;
    s.modality = Modality::FNIRS;
    s.channels = spec.fnirs_channels;
    s.fs = spec.fnirs_fs;
    s.timesteps = static_cast<std::size_t>(std::llround(spec.duration_s * spec.fnirs_fs));
    s.channel_ids = channel_names("F", s.channels);
    s.data.resize(s.channels * s.timesteps);

    auto kernel = response_kernel(spec.kernel_peak_s, s.fs);
    std::vector<double> response(s.timesteps, 0.0);
    for (std::size_t t = 0; t < s.timesteps; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < kernel.size() && k <= t; ++k)
            acc += boxcar(static_cast<double>(t - k) / s.fs, task) * kernel[k];
        response[t] = acc / s.fs; // discrete convolution scaled to seconds
    }

    for (std::size_t c = 0; c < s.channels; ++c) {
        double ch_scale = rng.uniform(0.8, 1.2);
        for (std::size_t t = 0; t < s.timesteps; ++t)
            s.at(c, t) = gain * ch_scale * response[t] + spec.noise_sd * rng.gaussian();
    }
    return s;
}

Signal make_eeg(const SynthSpec& spec, const TaskMeta& task, double gain, Rng& rng) {
    Signal s;
    s.modality = Modality::EEG;
    s.channels = spec.eeg_channels;
    s.fs = spec.eeg_fs;
    s.timesteps = static_cast<std::size_t>(std::llround(spec.duration_s * spec.eeg_fs));
    s.channel_ids = channel_names("E", s.channels);
    s.data.resize(s.channels * s.timesteps);

    double f = std::min(spec.eeg_osc_hz, 0.4 * s.fs);
    for (std::size_t c = 0; c < s.channels; ++c) {
        double ch_scale = rng.uniform(0.8, 1.2);
        double phase = rng.uniform(0.0, 6.283185307179586);
        for (std::size_t t = 0; t < s.timesteps; ++t) {
            double time = static_cast<double>(t) / s.fs;
            double box = boxcar(time, task);
            double osc = std::sin(6.283185307179586 * f * time + phase);
            // Task windows both modulate the oscillation amplitude and shift
            // the baseline, so window means carry class information here too.
            s.at(c, t) = ch_scale * (0.5 + gain * box) * osc + 0.3 * gain * box +
                         spec.noise_sd * rng.gaussian();
        }
    }
    return s;
}

} // namespace

std::vector<Record> synth_dataset(const SynthSpec& spec) {
    spec.validate();

    TaskMeta task;
    task.total_duration = spec.duration_s;
    task.question_count = spec.question_count;
    task.t_q = spec.duration_s / spec.question_count;

    std::vector<Record> records;
    records.reserve(spec.n_records);
    for (std::size_t i = 0; i < spec.n_records; ++i) {
        // Evenly spread labels: DEPRESSED when the cumulative quota advances.
        bool depressed = std::floor((i + 1) * spec.class_ratio) > std::floor(i * spec.class_ratio);
        Label label = depressed ? Label::DEPRESSED : Label::CONTROL;
        double gain = spec.activation_gain.at(label);

        Rng rng(Rng::derive(spec.seed, i));
        Record rec;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "S%04zu", i);
        rec.subject_id = buf;
        rec.label = label;
        rec.task = task;
        rec.signals.emplace(Modality::FNIRS, make_fnirs(spec, task, gain, rng));
        rec.signals.emplace(Modality::EEG, make_eeg(spec, task, gain, rng));
        rec.validate();
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace mrlmc
