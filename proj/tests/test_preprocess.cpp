#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mrlmc/preprocess.hpp"
#include "mrlmc/rng.hpp"

using namespace mrlmc;

namespace {

Signal make_signal(std::size_t channels, std::size_t timesteps, double fs) {
    Signal s;
    s.modality = Modality::FNIRS;
    s.channels = channels;
    s.timesteps = timesteps;
    s.fs = fs;
    for (std::size_t c = 0; c < channels; ++c) s.channel_ids.push_back("c" + std::to_string(c));
    s.data.assign(channels * timesteps, 0.0);
    return s;
}

Signal tone(double f_hz, double fs, std::size_t timesteps) {
    Signal s = make_signal(1, timesteps, fs);
    for (std::size_t t = 0; t < timesteps; ++t)
        s.data[t] = std::sin(2.0 * std::numbers::pi * f_hz * static_cast<double>(t) / fs);
    return s;
}

double central_rms(const Signal& s, std::size_t channel) {
    const std::size_t t0 = s.timesteps / 4, t1 = 3 * s.timesteps / 4;
    double acc = 0.0;
    for (std::size_t t = t0; t < t1; ++t) acc += s.at(channel, t) * s.at(channel, t);
    return std::sqrt(acc / static_cast<double>(t1 - t0));
}

} // namespace

TEST_CASE("filter frequency response has the requested band") {
    FilterSpec spec{0.5, 2.0, 201};
    auto h = design_bandpass(spec, 10.0);
    REQUIRE(h.size() == 201);

    CHECK(filter_gain(h, 10.0, 1.0) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(filter_gain(h, 10.0, 0.0) < 0.01);
    CHECK(filter_gain(h, 10.0, 4.0) < 0.01);
}

TEST_CASE("zero-phase band-pass keeps in-band tones and kills out-of-band ones") {
    FilterSpec spec{0.5, 2.0, 201};
    const double fs = 10.0;
    const std::size_t T = 2000;

    Signal pass = bandpass_fir(tone(1.0, fs, T), spec);
    Signal stop = bandpass_fir(tone(4.0, fs, T), spec);
    const double ref = central_rms(tone(1.0, fs, T), 0);

    const double pass_db = 20.0 * std::log10(central_rms(pass, 0) / ref);
    const double stop_db = 20.0 * std::log10(central_rms(stop, 0) / ref);
    CHECK(std::abs(pass_db) < 1.0);
    CHECK(stop_db < -40.0);
}

TEST_CASE("band-pass of zero is zero and of a constant is near zero") {
    FilterSpec spec{0.5, 2.0, 101};
    Signal zero = make_signal(2, 300, 10.0);
    Signal out = bandpass_fir(zero, spec);
    for (double v : out.data) CHECK(v == 0.0);

    Signal flat = make_signal(1, 300, 10.0);
    for (auto& v : flat.data) v = 3.7;
    Signal fout = bandpass_fir(flat, spec);
    for (std::size_t t = fout.timesteps / 4; t < 3 * fout.timesteps / 4; ++t)
        CHECK(std::abs(fout.at(0, t)) < 1e-3);
}

TEST_CASE("band-pass is linear") {
    FilterSpec spec{0.5, 2.0, 101};
    const double fs = 10.0;
    Rng rng(17);
    Signal x = make_signal(1, 400, fs);
    Signal y = make_signal(1, 400, fs);
    for (auto& v : x.data) v = rng.gaussian();
    for (auto& v : y.data) v = rng.gaussian();

    Signal mix = make_signal(1, 400, fs);
    for (std::size_t i = 0; i < mix.data.size(); ++i) mix.data[i] = 2.0 * x.data[i] - 0.5 * y.data[i];

    Signal fx = bandpass_fir(x, spec);
    Signal fy = bandpass_fir(y, spec);
    Signal fmix = bandpass_fir(mix, spec);
    for (std::size_t i = 0; i < fmix.data.size(); ++i)
        CHECK(fmix.data[i] == doctest::Approx(2.0 * fx.data[i] - 0.5 * fy.data[i]).epsilon(1e-9));
}

TEST_CASE("filter spec validation") {
    const FilterSpec zero_low{0.0, 2.0, 101};
    const FilterSpec inverted{2.0, 1.0, 101};
    const FilterSpec above_nyquist{1.0, 6.0, 101};
    const FilterSpec even_taps{1.0, 2.0, 100};
    const FilterSpec too_short{1.0, 2.0, 11};
    CHECK_THROWS_AS(zero_low.validate(10.0), ValidationError);
    CHECK_THROWS_AS(inverted.validate(10.0), ValidationError);
    CHECK_THROWS_AS(above_nyquist.validate(10.0), ValidationError);
    CHECK_THROWS_AS(even_taps.validate(10.0), ValidationError);
    CHECK_THROWS_AS(too_short.validate(10.0), ValidationError);
}

TEST_CASE("resampling at the same rate is a bitwise identity") {
    Rng rng(3);
    Signal x = make_signal(2, 100, 10.0);
    for (auto& v : x.data) v = rng.gaussian();
    Signal y = resample(x, 10.0);
    CHECK(y.data == x.data);
    CHECK(y.fs == 10.0);
}

TEST_CASE("resampling preserves constants exactly") {
    Signal x = make_signal(1, 120, 10.0);
    for (auto& v : x.data) v = -2.25;
    for (double fs_out : {4.0, 25.0, 100.0}) {
        Signal y = resample(x, fs_out);
        CHECK(y.timesteps == static_cast<std::size_t>(std::llround(120.0 * fs_out / 10.0)));
        for (double v : y.data) CHECK(v == doctest::Approx(-2.25).epsilon(1e-12));
    }
}

TEST_CASE("resampling tracks a slow sine away from the edges") {
    const double fs = 10.0, f = 0.4;
    Signal x = tone(f, fs, 400);
    Signal y = resample(x, 25.0);
    for (std::size_t t = y.timesteps / 4; t < 3 * y.timesteps / 4; ++t) {
        const double expect = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(t) / 25.0);
        CHECK(y.at(0, t) == doctest::Approx(expect).epsilon(0.02));
    }
}

TEST_CASE("channel selection restricts and reorders") {
    Signal s = make_signal(3, 4, 10.0);
    for (std::size_t i = 0; i < s.data.size(); ++i) s.data[i] = static_cast<double>(i);

    Signal out = select_channels(s, {"c2", "c0"});
    REQUIRE(out.channels == 2);
    CHECK(out.channel_ids == std::vector<std::string>{"c2", "c0"});
    CHECK(out.at(0, 0) == s.at(2, 0));
    CHECK(out.at(1, 3) == s.at(0, 3));

    CHECK_THROWS_AS(select_channels(s, {}), ValidationError);
    bool threw = false;
    try {
        select_channels(s, {"c9"});
    } catch (const ValidationError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("c9") != std::string::npos);
    }
    CHECK(threw);
}

// forward model and inversion both speak umol/L, so the loop is an identity
TEST_CASE("hemoglobin inversion recovers the forward model") {
    const std::size_t C = 3, T = 50;
    const double fs = 10.0;
    Rng rng(23);
    std::vector<double> hbo(C * T), hbr(C * T);
    for (auto& v : hbo) v = 10.0 * rng.gaussian();
    for (auto& v : hbr) v = 10.0 * rng.gaussian();
    std::vector<double> dist = {3.0, 2.5, 3.2};

    BeerLambertConstants k;
    OpticalFrame frame = hemoglobin_to_od(hbo, hbr, C, T, fs, dist, k);
    Signal out = od_to_hemoglobin(frame);

    REQUIRE(out.data.size() == hbo.size());
    for (std::size_t i = 0; i < hbo.size(); ++i)
        CHECK(out.data[i] == doctest::Approx(hbo[i]).epsilon(1e-9));
}

TEST_CASE("hemoglobin inversion is linear and zero maps to zero") {
    const std::size_t C = 1, T = 10;
    std::vector<double> hbo(T, 0.002), hbr(T, -0.001), dist = {3.0};
    BeerLambertConstants k;

    OpticalFrame frame = hemoglobin_to_od(hbo, hbr, C, T, 10.0, dist, k);
    Signal base = od_to_hemoglobin(frame);

    OpticalFrame doubled = frame;
    for (auto& v : doubled.od[0]) v *= 2.0;
    for (auto& v : doubled.od[1]) v *= 2.0;
    Signal twice = od_to_hemoglobin(doubled);
    for (std::size_t i = 0; i < base.data.size(); ++i)
        CHECK(twice.data[i] == doctest::Approx(2.0 * base.data[i]).epsilon(1e-12));

    OpticalFrame zero = frame;
    for (auto& v : zero.od[0]) v = 0.0;
    for (auto& v : zero.od[1]) v = 0.0;
    Signal nothing = od_to_hemoglobin(zero);
    for (double v : nothing.data) CHECK(v == 0.0);
}

TEST_CASE("singular extinction matrix is rejected") {
    BeerLambertConstants k;
    k.extinction[1][0] = k.extinction[0][0];
    k.extinction[1][1] = k.extinction[0][1];
    CHECK_THROWS_AS(k.validate(), ValidationError);
}
