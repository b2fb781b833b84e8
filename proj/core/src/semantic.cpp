#include "mrlmc/semantic.hpp"

#include <cmath>

namespace mrlmc {

using ad::Tensor;

void TransformerConfig::validate(std::size_t n_scale, std::size_t n_out) const {
    if (n_trans < 1) throw ValidationError("transformer: n_trans must be >= 1");
    if (n_head < 1) throw ValidationError("transformer: n_head must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0)
        throw ValidationError("transformer: dropout must be in [0, 1)");
    if (!feasible(n_scale, n_out))
        throw ValidationError("transformer: n_head must divide the token width (n_out) and m");
}

bool TransformerConfig::feasible(std::size_t n_scale, std::size_t n_out) const {
    return n_head >= 1 && n_out % n_head == 0 && (n_scale * n_out) % n_head == 0;
}

ad::Tensor mh_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                        const Tensor& wq, const Tensor& wk, const Tensor& wv,
                        const Tensor& wo, std::size_t n_head) {
    if (q.shape().size() != 2) throw NumericError("mh_attention: expects token matrix [S,W]");
    const std::size_t width = q.shape()[1];
    if (width % n_head != 0) throw NumericError("mh_attention: width not divisible by head count");
    const std::size_t d_k = width / n_head;

    Tensor qp = ad::matmul(q, wq);
    Tensor kp = ad::matmul(k, wk);
    Tensor vp = ad::matmul(v, wv);

    std::vector<Tensor> heads;
    heads.reserve(n_head);
    for (std::size_t h = 0; h < n_head; ++h) {
        Tensor qh = ad::slice_cols(qp, h * d_k, (h + 1) * d_k);
        Tensor kh = ad::slice_cols(kp, h * d_k, (h + 1) * d_k);
        Tensor vh = ad::slice_cols(vp, h * d_k, (h + 1) * d_k);
        Tensor scores = ad::scale(ad::matmul_nt(qh, kh), 1.0 / std::sqrt(static_cast<double>(d_k)));
        Tensor attn = ad::softmax_rows(scores);
        heads.push_back(ad::matmul(attn, vh));
    }
    return ad::matmul(ad::concat_cols(heads), wo);
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

SemanticEncoder::SemanticEncoder(const TransformerConfig& cfg, std::size_t n_scale,
                                 std::size_t n_out, Rng& init_rng)
    : cfg_(cfg), n_scale_(n_scale), n_out_(n_out) {
    cfg_.validate(n_scale, n_out);
    const std::size_t hidden = cfg_.mlp_hidden == 0 ? 4 * n_out : cfg_.mlp_hidden;

    units_.resize(cfg_.n_trans);
    for (auto& u : units_) {
        u.wq = init_param({n_out, n_out}, n_out, init_rng);
        u.wk = init_param({n_out, n_out}, n_out, init_rng);
        u.wv = init_param({n_out, n_out}, n_out, init_rng);
        u.wo = init_param({n_out, n_out}, n_out, init_rng);
        u.mlp_w1 = init_param({n_out, hidden}, n_out, init_rng);
        u.mlp_b1 = init_param({hidden}, n_out, init_rng);
        u.mlp_w2 = init_param({hidden, n_out}, hidden, init_rng);
        u.mlp_b2 = init_param({n_out}, hidden, init_rng);
    }
}

Tensor SemanticEncoder::unit_forward(const Tensor& tokens, std::size_t unit, bool train,
                                     Rng& rng) const {
    const auto& u = units_.at(unit);

    // pre-norm attention residual, then pre-norm MLP residual
    Tensor normed = ad::layer_norm(tokens);
    Tensor attn = mh_attention(normed, normed, normed, u.wq, u.wk, u.wv, u.wo, cfg_.n_head);
    attn = ad::dropout(attn, cfg_.dropout, train, rng);
    Tensor psi = ad::add(attn, tokens);

    Tensor normed2 = ad::layer_norm(psi);
    Tensor hidden = ad::relu(ad::linear(normed2, u.mlp_w1, u.mlp_b1));
    hidden = ad::dropout(hidden, cfg_.dropout, train, rng);
    Tensor mlp = ad::linear(hidden, u.mlp_w2, u.mlp_b2);
    Tensor z = ad::add(mlp, psi);
    ad::check_finite(z, "transformer unit " + std::to_string(unit));
    return z;
}

Tensor SemanticEncoder::forward(const Tensor& v, bool train, Rng& rng) const {
    if (v.size() != n_scale_ * n_out_)
        throw NumericError("semantic: input dimension does not equal m");
    Tensor tokens = ad::reshape(v, {n_scale_, n_out_});
    for (std::size_t i = 0; i < units_.size(); ++i)
        tokens = unit_forward(tokens, i, train, rng);
    return ad::reshape(tokens, {n_scale_ * n_out_});
}

void SemanticEncoder::collect_params(std::vector<ParamRef>& out,
                                     const std::string& prefix) const {
    for (std::size_t i = 0; i < units_.size(); ++i) {
        const std::string base = prefix + ".unit" + std::to_string(i);
        const auto& u = units_[i];
        out.push_back({base + ".wq", u.wq});
        out.push_back({base + ".wk", u.wk});
        out.push_back({base + ".wv", u.wv});
        out.push_back({base + ".wo", u.wo});
        out.push_back({base + ".mlp.w1", u.mlp_w1});
        out.push_back({base + ".mlp.b1", u.mlp_b1});
        out.push_back({base + ".mlp.w2", u.mlp_w2});
        out.push_back({base + ".mlp.b2", u.mlp_b2});
    }
}

ad::Tensor l_sc(const Tensor& z_f, const Tensor& z_e) {
    // 1 - cos keeps the loss nonnegative and minimized at perfect agreement;
    // minimizing the raw similarity would push the features apart.
    return ad::add_scalar(ad::scale(ad::cosine_sim(z_f, z_e), -1.0), 1.0);
}

} // namespace mrlmc
