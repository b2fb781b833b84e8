#include "mrlmc/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mrlmc {

void FilterSpec::validate(double fs) const {
    if (low_hz <= 0.0 || low_hz >= high_hz || high_hz >= fs / 2.0)
        throw ValidationError("filter: passband requires 0 < low_hz < high_hz < fs/2");
    if (taps < 31 || taps % 2 == 0)
        throw ValidationError("filter: taps must be odd and >= 31");
}

std::vector<double> design_bandpass(const FilterSpec& spec, double fs) {
    spec.validate(fs);
    const std::size_t n = spec.taps;
    const auto mid = static_cast<std::ptrdiff_t>(n / 2);
    const double w_lo = 2.0 * std::numbers::pi * spec.low_hz / fs;
    const double w_hi = 2.0 * std::numbers::pi * spec.high_hz / fs;

    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto k = static_cast<std::ptrdiff_t>(i) - mid;
        double ideal;
        if (k == 0) {
            ideal = (w_hi - w_lo) / std::numbers::pi;
        } else {
            double kd = static_cast<double>(k);
            ideal = (std::sin(w_hi * kd) - std::sin(w_lo * kd)) / (std::numbers::pi * kd);
        }
        double window =
            0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(n - 1));
        h[i] = ideal * window;
    }
    return h;
}

double filter_gain(const std::vector<double>& taps, double fs, double f_hz) {
    double re = 0.0, im = 0.0;
    const double w = 2.0 * std::numbers::pi * f_hz / fs;
    for (std::size_t i = 0; i < taps.size(); ++i) {
        re += taps[i] * std::cos(w * static_cast<double>(i));
        im -= taps[i] * std::sin(w * static_cast<double>(i));
    }
    return std::hypot(re, im);
}

namespace {

// Centered "same" convolution of a symmetric FIR, applied twice (equivalent
// to forward-backward for a linear-phase filter), on a reflect-padded copy.
std::vector<double> filtfilt_channel(const std::vector<double>& x,
                                     const std::vector<double>& h) {
    const std::size_t t_len = x.size();
    const std::size_t pad = std::min(h.size(), t_len - 1);
    std::vector<double> ext(t_len + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext[i] = x[pad - i];
    std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
    for (std::size_t i = 0; i < pad; ++i) ext[pad + t_len + i] = x[t_len - 2 - i];

    const auto mid = static_cast<std::ptrdiff_t>(h.size() / 2);
    auto one_pass = [&](const std::vector<double>& in) {
        std::vector<double> out(in.size(), 0.0);
        const auto n = static_cast<std::ptrdiff_t>(in.size());
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < h.size(); ++k) {
                std::ptrdiff_t j = i + mid - static_cast<std::ptrdiff_t>(k);
                if (j >= 0 && j < n) acc += h[k] * in[static_cast<std::size_t>(j)];
            }
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    };

    auto once = one_pass(ext);
    auto twice = one_pass(once);
    return {twice.begin() + static_cast<std::ptrdiff_t>(pad),
            twice.begin() + static_cast<std::ptrdiff_t>(pad + t_len)};
}

} // namespace

Signal bandpass_fir(const Signal& signal, const FilterSpec& spec) {
    signal.validate();
    auto h = design_bandpass(spec, signal.fs);

    Signal out = signal;
    for (std::size_t c = 0; c < signal.channels; ++c) {
        std::vector<double> row(signal.data.begin() + static_cast<std::ptrdiff_t>(c * signal.timesteps),
                                signal.data.begin() + static_cast<std::ptrdiff_t>((c + 1) * signal.timesteps));
        auto filtered = filtfilt_channel(row, h);
        std::copy(filtered.begin(), filtered.end(),
                  out.data.begin() + static_cast<std::ptrdiff_t>(c * signal.timesteps));
    }
    out.validate("bandpass output");
    return out;
}

Signal resample(const Signal& signal, double fs_out) {
    signal.validate();
    if (fs_out <= 0.0) throw ValidationError("resample: fs_out must be > 0");
    if (fs_out == signal.fs) return signal;

    const double ratio = fs_out / signal.fs;
    const auto n_out = static_cast<std::size_t>(std::llround(
        static_cast<double>(signal.timesteps) * ratio));

    // Windowed-sinc interpolation; cutoff scaled down when decimating, and
    // weights renormalized per output sample so constants survive exactly.
    const double fc = std::min(1.0, ratio);
    const double half_width = 16.0 / fc;

    Signal out;
    out.modality = signal.modality;
    out.channels = signal.channels;
    out.timesteps = std::max<std::size_t>(1, n_out);
    out.fs = fs_out;
    out.channel_ids = signal.channel_ids;
    out.data.assign(out.channels * out.timesteps, 0.0);

    const auto t_in = static_cast<std::ptrdiff_t>(signal.timesteps);
    for (std::size_t j = 0; j < out.timesteps; ++j) {
        const double center = static_cast<double>(j) / ratio;
        const auto lo = static_cast<std::ptrdiff_t>(std::ceil(center - half_width));
        const auto hi = static_cast<std::ptrdiff_t>(std::floor(center + half_width));
        double wsum = 0.0;
        std::vector<std::pair<std::ptrdiff_t, double>> weights;
        weights.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::ptrdiff_t n = lo; n <= hi; ++n) {
            const double d = (static_cast<double>(n) - center) * fc;
            double sinc = d == 0.0 ? 1.0
                                   : std::sin(std::numbers::pi * d) / (std::numbers::pi * d);
            const double u = (static_cast<double>(n) - center) / half_width;
            const double hann = 0.5 * (1.0 + std::cos(std::numbers::pi * u));
            const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(n, 0, t_in - 1);
            const double w = sinc * hann;
            weights.emplace_back(idx, w);
            wsum += w;
        }
        for (std::size_t c = 0; c < out.channels; ++c) {
            double acc = 0.0;
            for (const auto& [idx, w] : weights)
                acc += w * signal.at(c, static_cast<std::size_t>(idx));
            out.at(c, j) = acc / wsum;
        }
    }
    out.validate("resample output");
    return out;
}

Signal select_channels(const Signal& signal, const std::vector<std::string>& keep) {
    signal.validate();
    if (keep.empty()) throw ValidationError("empty channel selection");

    Signal out;
    out.modality = signal.modality;
    out.channels = keep.size();
    out.timesteps = signal.timesteps;
    out.fs = signal.fs;
    out.channel_ids = keep;
    out.data.resize(out.channels * out.timesteps);

    for (std::size_t k = 0; k < keep.size(); ++k) {
        auto it = std::find(signal.channel_ids.begin(), signal.channel_ids.end(), keep[k]);
        if (it == signal.channel_ids.end())
            throw ValidationError("unknown channel id: " + keep[k]);
        auto src = static_cast<std::size_t>(it - signal.channel_ids.begin());
        std::copy_n(signal.data.begin() + static_cast<std::ptrdiff_t>(src * signal.timesteps),
                    signal.timesteps,
                    out.data.begin() + static_cast<std::ptrdiff_t>(k * out.timesteps));
    }
    return out;
}

void BeerLambertConstants::validate() const {
    for (int w = 0; w < 2; ++w) {
        if (dpf[w] <= 0.0) throw ValidationError("beer_lambert: dpf must be > 0");
        for (int c = 0; c < 2; ++c)
            if (extinction[w][c] <= 0.0)
                throw ValidationError("beer_lambert: extinction coefficients must be > 0");
    }
    double det = extinction[0][0] * extinction[1][1] - extinction[0][1] * extinction[1][0];
    if (std::abs(det) < 1e-12)
        throw ValidationError("beer_lambert: singular extinction matrix");
}

void OpticalFrame::validate() const {
    if (channels < 1 || timesteps < 1)
        throw ValidationError("optical frame: channels and timesteps must be >= 1");
    if (fs <= 0.0) throw ValidationError("optical frame: fs must be > 0");
    for (int w = 0; w < 2; ++w)
        if (od[w].size() != channels * timesteps)
            throw ValidationError("optical frame: od matrix size mismatch");
    if (source_detector_cm.size() != channels)
        throw ValidationError("optical frame: one source-detector distance per channel required");
    for (double d : source_detector_cm)
        if (d <= 0.0) throw ValidationError("optical frame: distances must be > 0");
    constants.validate();
}

Signal od_to_hemoglobin(const OpticalFrame& frame) {
    frame.validate();
    const auto& e = frame.constants.extinction;
    const double det = e[0][0] * e[1][1] - e[0][1] * e[1][0];

    Signal out;
    out.modality = Modality::FNIRS;
    out.channels = frame.channels;
    out.timesteps = frame.timesteps;
    out.fs = frame.fs;
    out.channel_ids = frame.channel_ids.empty()
                          ? std::vector<std::string>(frame.channels, "")
                          : frame.channel_ids;
    if (out.channel_ids.size() != frame.channels)
        throw ValidationError("optical frame: channel_ids length mismatch");
    out.data.resize(out.channels * out.timesteps);

    for (std::size_t c = 0; c < frame.channels; ++c) {
        const double d = frame.source_detector_cm[c];
        for (std::size_t t = 0; t < frame.timesteps; ++t) {
            // effective OD per unit pathlength, one value per wavelength
            const double y0 = frame.od[0][c * frame.timesteps + t] / (d * frame.constants.dpf[0]);
            const double y1 = frame.od[1][c * frame.timesteps + t] / (d * frame.constants.dpf[1]);
            const double hbo_mM = (y0 * e[1][1] - y1 * e[0][1]) / det;
            out.at(c, t) = hbo_mM * 1000.0; // mM -> umol/L
        }
    }
    out.validate("od_to_hemoglobin output");
    return out;
}

OpticalFrame hemoglobin_to_od(const std::vector<double>& hbo,
                              const std::vector<double>& hbr,
                              std::size_t channels, std::size_t timesteps, double fs,
                              const std::vector<double>& source_detector_cm,
                              const BeerLambertConstants& constants) {
    OpticalFrame frame;
    frame.channels = channels;
    frame.timesteps = timesteps;
    frame.fs = fs;
    frame.source_detector_cm = source_detector_cm;
    frame.constants = constants;
    frame.od[0].resize(channels * timesteps);
    frame.od[1].resize(channels * timesteps);
    const auto& e = constants.extinction;
    for (std::size_t c = 0; c < channels; ++c) {
        const double d = source_detector_cm[c];
        for (std::size_t t = 0; t < timesteps; ++t) {
            const std::size_t i = c * timesteps + t;
            const double hbo_mM = hbo[i] / 1000.0;
            const double hbr_mM = hbr[i] / 1000.0;
            for (int w = 0; w < 2; ++w)
                frame.od[w][i] = d * constants.dpf[w] * (e[w][0] * hbo_mM + e[w][1] * hbr_mM);
        }
    }
    return frame;
}

} // namespace mrlmc
