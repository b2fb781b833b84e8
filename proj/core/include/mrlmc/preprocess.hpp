#pragma once

#include <vector>

#include "mrlmc/signal.hpp"

namespace mrlmc {

/// Linear-phase FIR band-pass description (windowed-sinc design).
struct FilterSpec {
    double low_hz = 0.01;
    double high_hz = 0.08;
    std::size_t taps = 1001; // odd, >= 31

    void validate(double fs) const;
};

/// Windowed-sinc (Hamming) band-pass taps for the given sampling rate.
std::vector<double> design_bandpass(const FilterSpec& spec, double fs);

/// Complex magnitude of the filter's frequency response at f_hz. The
/// forward-backward application below squares this.
double filter_gain(const std::vector<double>& taps, double fs, double f_hz);

/// Zero-phase band-pass: the designed FIR applied forward then backward per
/// channel, with reflect padding of one filter length at each end. Output
/// length equals input length.
Signal bandpass_fir(const Signal& signal, const FilterSpec& spec);

/// Band-limited resampling by windowed-sinc interpolation. New timestep count
/// is round(timesteps * fs_out / fs); kernel weights are renormalized per
/// output sample so constants are preserved exactly.
Signal resample(const Signal& signal, double fs_out);

/// Restrict and reorder rows to `keep`; channel_ids follow.
Signal select_channels(const Signal& signal, const std::vector<std::string>& keep);

/// Beer-Lambert constants. Extinction coefficients are indexed
/// [wavelength][chromophore] with wavelengths (690, 830) nm and chromophores
/// (HbO, HbR). Defaults are conventional literature values in 1/(mM*cm).
struct BeerLambertConstants {
    double extinction[2][2] = {{0.35, 2.05}, {1.06, 0.69}};
    double dpf[2] = {6.0, 6.0}; // differential pathlength factor per wavelength

    void validate() const;
};

/// Optical-density change at two wavelengths: od[w] is channels x timesteps.
struct OpticalFrame {
    std::size_t channels = 0;
    std::size_t timesteps = 0;
    double fs = 0.0;
    std::vector<std::string> channel_ids;
    std::vector<double> od[2];              // per wavelength, row-major C x T
    std::vector<double> source_detector_cm; // per channel
    BeerLambertConstants constants;

    void validate() const;
};

/// Modified Beer-Lambert inversion: solves the 2x2 system per channel and
/// timestep for (dHbO, dHbR) and returns the HbO concentration change as an
/// FNIRS Signal (mM scaled to umol/L).
Signal od_to_hemoglobin(const OpticalFrame& frame);

/// Forward model for the inversion above; test oracle and data-builder.
OpticalFrame hemoglobin_to_od(const std::vector<double>& hbo,
                              const std::vector<double>& hbr,
                              std::size_t channels, std::size_t timesteps, double fs,
                              const std::vector<double>& source_detector_cm,
                              const BeerLambertConstants& constants);

} // namespace mrlmc
