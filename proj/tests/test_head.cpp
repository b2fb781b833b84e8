#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mrlmc/head.hpp"

using namespace mrlmc;
using ad::Tensor;

namespace {

Tensor random_vec(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.gaussian();
    return Tensor::leaf({n}, std::move(v));
}

} // namespace

TEST_CASE("head outputs a two-class distribution") {
    const std::size_t m = 12;
    Rng init(4);
    FusionHead head(m, 0.0, init);
    Rng fwd(0);
    auto p = head.forward(random_vec(m, 1), random_vec(m, 2), false, fwd);
    REQUIRE(p.size() == 2);
    CHECK(p.value()[0] > 0.0);
    CHECK(p.value()[1] > 0.0);
    CHECK(p.value()[0] + p.value()[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero weights produce an uninformative half-half output") {
    const std::size_t m = 8;
    Rng init(4);
    FusionHead head(m, 0.0, init);
    std::vector<ParamRef> params;
    head.collect_params(params, "head");
    for (auto& p : params)
        for (auto& v : p.tensor.mutable_value()) v = 0.0;

    Rng fwd(0);
    auto p = head.forward(random_vec(m, 9), random_vec(m, 10), false, fwd);
    CHECK(p.value()[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.value()[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("focal loss spot value") {
    FocalConfig cfg; // alpha 0.25, gamma 2
    const double v = focal_loss_value(0.9, cfg);
    CHECK(std::abs(v - 2.634e-4) < 1e-7);

    auto t = focal_loss(Tensor::scalar(0.9), cfg);
    CHECK(std::abs(t.item() - v) < 1e-12);
}

TEST_CASE("zero focusing exponent reduces to weighted cross-entropy") {
    FocalConfig cfg;
    cfg.gamma = 0.0;
    for (double p : {0.1, 0.4, 0.9, 0.999}) {
        const double expect = -cfg.alpha_f * std::log(p);
        CHECK(focal_loss_value(p, cfg) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("focal loss decreases as the true-class probability rises") {
    FocalConfig cfg;
    double prev = focal_loss_value(0.05, cfg);
    for (double p : {0.2, 0.5, 0.8, 0.95}) {
        const double cur = focal_loss_value(p, cfg);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(focal_loss_value(1.0, cfg) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("probability clamp keeps the loss finite near zero") {
    FocalConfig cfg;
    const double v = focal_loss_value(1e-12, cfg);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(focal_loss_value(1e-7, cfg)).epsilon(1e-12));
    CHECK_THROWS_AS(focal_loss_value(0.0, cfg), NumericError);
    CHECK_THROWS_AS(focal_loss_value(1.5, cfg), NumericError);
}

TEST_CASE("total objective is an affine combination of the terms") {
    LossWeights w;
    w.lambda1 = 0.7;
    w.lambda2 = 1.3;
    auto total = total_loss(Tensor::scalar(2.0), Tensor::scalar(0.5), Tensor::scalar(0.1), w);
    CHECK(total.item() == doctest::Approx(0.7 * 2.0 + 1.3 * 0.5 + 0.1).epsilon(1e-12));

    w.lambda1 = 0.0;
    w.lambda2 = 0.0;
    auto fl_only = total_loss(Tensor::scalar(2.0), Tensor::scalar(0.5), Tensor::scalar(0.1), w);
    CHECK(fl_only.item() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("config validation") {
    FocalConfig bad;
    bad.alpha_f = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = FocalConfig{};
    bad.gamma = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    LossWeights w;
    w.lambda1 = -0.1;
    CHECK_THROWS_AS(w.validate(), ValidationError);
}
