#include "mrlmc/head.hpp"

#include <cmath>

namespace mrlmc {

using ad::Tensor;

void FocalConfig::validate() const {
    if (alpha_f <= 0.0 || alpha_f > 1.0) throw ValidationError("focal: alpha_f must be in (0, 1]");
    if (gamma < 0.0) throw ValidationError("focal: gamma must be >= 0");
}

void LossWeights::validate() const {
    if (lambda1 < 0.0 || lambda2 < 0.0)
        throw ValidationError("loss weights: lambda1 and lambda2 must be >= 0");
}

namespace {

Tensor init_param(std::vector<std::size_t> shape, std::size_t fan_in, Rng& rng) {
    std::size_t count = 1;
    for (auto s : shape) count *= s;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::vector<double> data(count);
    for (auto& v : data) v = rng.uniform(-bound, bound);
    return Tensor::leaf(std::move(shape), std::move(data), /*requires_grad=*/true);
}

} // namespace

FusionHead::FusionHead(std::size_t m, double dropout, Rng& init_rng)
    : m_(m), dropout_(dropout) {
    if (m < 1) throw ValidationError("head: m must be >= 1");
    w1_ = init_param({2 * m, m}, 2 * m, init_rng);
    b1_ = init_param({m}, 2 * m, init_rng);
    w2_ = init_param({m, 2}, m, init_rng);
    b2_ = init_param({2}, m, init_rng);
}

Tensor FusionHead::forward(const Tensor& z_f, const Tensor& z_e, bool train, Rng& rng) const {
    if (z_f.size() != m_ || z_e.size() != m_)
        throw NumericError("head: feature dimension mismatch");
    Tensor fused = ad::reshape(ad::concat({z_f, z_e}), {1, 2 * m_});
    Tensor hidden = ad::relu(ad::linear(fused, w1_, b1_));
    hidden = ad::dropout(hidden, dropout_, train, rng);
    Tensor logits = ad::linear(hidden, w2_, b2_);
    return ad::reshape(ad::softmax_rows(logits), {2});
}

void FusionHead::collect_params(std::vector<ParamRef>& out, const std::string& prefix) const {
    out.push_back({prefix + ".w1", w1_});
    out.push_back({prefix + ".b1", b1_});
    out.push_back({prefix + ".w2", w2_});
    out.push_back({prefix + ".b2", b2_});
}

Tensor focal_loss(const Tensor& p_true, const FocalConfig& cfg) {
    cfg.validate();
    const double p = p_true.value()[0];
    if (!(p > 0.0) || p > 1.0 + 1e-12)
        throw NumericError("focal: probability outside (0, 1]");
    // clamp keeps log finite when the model is confidently wrong
    Tensor clamped = p_true;
    if (p < 1e-7) clamped = ad::add_scalar(p_true, 1e-7 - p);
    Tensor one_minus = ad::add_scalar(ad::scale(clamped, -1.0), 1.0);
    Tensor focus = cfg.gamma == 0.0 ? Tensor::scalar(1.0)
                                    : ad::pow_t(ad::add_scalar(one_minus, 1e-12), cfg.gamma);
    return ad::scale(ad::mul(focus, ad::log_t(clamped)), -cfg.alpha_f);
}

double focal_loss_value(double p_true, const FocalConfig& cfg) {
    cfg.validate();
    if (!(p_true > 0.0) || p_true > 1.0 + 1e-12)
        throw NumericError("focal: probability outside (0, 1]");
    const double p = std::max(p_true, 1e-7);
    return -cfg.alpha_f * std::pow(1.0 - p, cfg.gamma) * std::log(p);
}

Tensor total_loss(const Tensor& msc, const Tensor& sc, const Tensor& fl, const LossWeights& w) {
    w.validate();
    return ad::add(ad::add(ad::scale(msc, w.lambda1), ad::scale(sc, w.lambda2)), fl);
}

} // namespace mrlmc
