#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "mrlmc/msc.hpp"
#include "mrlmc/synth.hpp"

using namespace mrlmc;

namespace {

std::map<Modality, std::size_t> both(std::size_t f, std::size_t e) {
    return {{Modality::FNIRS, f}, {Modality::EEG, e}};
}

Signal random_signal(Modality m, std::size_t channels, std::size_t timesteps,
                     std::uint64_t seed) {
    Signal s;
    s.modality = m;
    s.channels = channels;
    s.timesteps = timesteps;
    s.fs = 10.0;
    for (std::size_t c = 0; c < channels; ++c) s.channel_ids.push_back("c" + std::to_string(c));
    Rng rng(seed);
    s.data.resize(channels * timesteps);
    for (auto& v : s.data) v = rng.gaussian();
    return s;
}

} // namespace

TEST_CASE("output width is branches times per-branch width") {
    MSCConfig cfg;
    cfg.d = 8;
    cfg.n_scale = 3;
    cfg.n_out = 4;
    CHECK(cfg.m() == 12);

    Rng init(1);
    MSCEncoder enc(cfg, both(4, 6), init);
    Rng fwd(2);
    auto v = enc.forward(random_signal(Modality::FNIRS, 4, 50, 3), false, fwd);
    REQUIRE(v.shape() == std::vector<std::size_t>{12});

    auto u = enc.forward(random_signal(Modality::EEG, 6, 50, 4), false, fwd);
    CHECK(u.shape() == std::vector<std::size_t>{12});
}

TEST_CASE("initialization is deterministic in the seed") {
    MSCConfig cfg;
    cfg.d = 8;
    cfg.n_scale = 2;
    cfg.n_out = 4;
    Rng a(7), b(7), c(8);
    MSCEncoder e1(cfg, both(3, 3), a);
    MSCEncoder e2(cfg, both(3, 3), b);
    MSCEncoder e3(cfg, both(3, 3), c);

    std::vector<ParamRef> p1, p2, p3;
    e1.collect_params(p1, "m");
    e2.collect_params(p2, "m");
    e3.collect_params(p3, "m");
    REQUIRE(p1.size() == p2.size());
    bool all_equal = true, any_diff_seed = false;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        if (p1[i].tensor.value() != p2[i].tensor.value()) all_equal = false;
        if (p1[i].tensor.value() != p3[i].tensor.value()) any_diff_seed = true;
    }
    CHECK(all_equal);
    CHECK(any_diff_seed);
}

TEST_CASE("the temporal trunk is shared; only adapters are per modality") {
    MSCConfig cfg;
    cfg.d = 6;
    cfg.n_scale = 2;
    cfg.n_out = 4;
    Rng init(3);
    MSCEncoder enc(cfg, both(4, 4), init);

    std::vector<ParamRef> params;
    enc.collect_params(params, "msc");
    std::size_t adapters = 0, trunk = 0;
    for (const auto& p : params) {
        if (p.name.find("adapter") != std::string::npos)
            ++adapters;
        else
            ++trunk;
    }
    CHECK(adapters == 4); // w and b for each of the two modalities
    CHECK(trunk > 0);

    // with equal channel counts, feeding the same values through the two
    // adapters differs only by adapter weights; zeroing them equalizes it
    Signal f = random_signal(Modality::FNIRS, 4, 40, 5);
    Signal e = f;
    e.modality = Modality::EEG;

    for (auto& p : params)
        if (p.name.find("adapter") != std::string::npos)
            for (auto& v : p.tensor.mutable_value()) v = 0.01;

    Rng fwd(1);
    auto vf = enc.forward(f, false, fwd);
    auto ve = enc.forward(e, false, fwd);
    for (std::size_t i = 0; i < vf.size(); ++i)
        CHECK(vf.value()[i] == doctest::Approx(ve.value()[i]).epsilon(1e-12));
}

// The aggregation is elementwise max(alpha * n, n) of a normalized vector n.
// Running the same weights under two alpha values reveals n's sign: where the
// outputs agree, n >= 0; elsewhere their ratio must equal alpha1/alpha2.
TEST_CASE("aggregation matches the leaky-max form elementwise") {
    MSCConfig c1;
    c1.d = 8;
    c1.n_scale = 3;
    c1.n_out = 8;
    c1.alpha = 0.3;
    MSCConfig c2 = c1;
    c2.alpha = 0.5;

    Rng i1(9), i2(9);
    MSCEncoder e1(c1, both(4, 4), i1);
    MSCEncoder e2(c2, both(4, 4), i2);

    Signal x = random_signal(Modality::FNIRS, 4, 60, 12);
    Rng r1(0), r2(0);
    auto v1 = e1.forward(x, false, r1);
    auto v2 = e2.forward(x, false, r2);

    bool saw_negative = false;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        const double a = v1.value()[i], b = v2.value()[i];
        if (std::abs(a - b) < 1e-12) {
            CHECK(a >= 0.0);
        } else {
            saw_negative = true;
            CHECK(a / b == doctest::Approx(0.3 / 0.5).epsilon(1e-9));
            CHECK(a < 0.0);
        }
    }
    CHECK(saw_negative);
}

TEST_CASE("unknown modality channel count is rejected at the forward call") {
    MSCConfig cfg;
    cfg.d = 6;
    cfg.n_scale = 2;
    cfg.n_out = 4;
    Rng init(2);
    MSCEncoder enc(cfg, {{Modality::FNIRS, 4}}, init);
    Rng fwd(0);
    CHECK_THROWS_AS(enc.forward(random_signal(Modality::EEG, 4, 30, 1), false, fwd),
                    ValidationError);
}

TEST_CASE("config validation rejects degenerate shapes") {
    MSCConfig cfg;
    cfg.n_scale = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = MSCConfig{};
    cfg.kernel = 4; // must be odd
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = MSCConfig{};
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
