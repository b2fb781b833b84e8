#pragma once

#include <vector>

#include "mrlmc/autodiff.hpp"
#include "mrlmc/msc.hpp"

namespace mrlmc {

struct TransformerConfig {
    std::size_t n_trans = 1;
    std::size_t n_head = 16;
    std::size_t mlp_hidden = 0; // 0 -> 4 x token width
    double dropout = 0.1;
    bool shared_across_modalities = true;

    /// Token layout is n_scale tokens of width n_out, so the head count must
    /// divide the token width (and hence m).
    void validate(std::size_t n_scale, std::size_t n_out) const;
    bool feasible(std::size_t n_scale, std::size_t n_out) const;
};

/// Scaled-dot-product multi-head self-attention over token sequences [S, W].
/// All four projections are W x W; heads are contiguous column slices.
ad::Tensor mh_attention(const ad::Tensor& q, const ad::Tensor& k, const ad::Tensor& v,
                        const ad::Tensor& wq, const ad::Tensor& wk, const ad::Tensor& wv,
                        const ad::Tensor& wo, std::size_t n_head);

/// Stack of pre-norm transformer units applied to the m-vector reshaped as
/// n_scale tokens of width n_out (one token per scale branch); flattens back
/// to m. Weights are shared between modalities when the config says so.
class SemanticEncoder {
public:
    SemanticEncoder(const TransformerConfig& cfg, std::size_t n_scale, std::size_t n_out,
                    Rng& init_rng);

    ad::Tensor forward(const ad::Tensor& v, bool train, Rng& rng) const;

    /// One unit applied to a token sequence; exposed for compositionality tests.
    ad::Tensor unit_forward(const ad::Tensor& tokens, std::size_t unit, bool train,
                            Rng& rng) const;

    const TransformerConfig& config() const { return cfg_; }
    void collect_params(std::vector<ParamRef>& out, const std::string& prefix) const;

private:
    struct Unit {
        ad::Tensor wq, wk, wv, wo;
        ad::Tensor mlp_w1, mlp_b1, mlp_w2, mlp_b2;
    };

    TransformerConfig cfg_;
    std::size_t n_scale_, n_out_;
    std::vector<Unit> units_;
};

/// Semantic consistency loss: 1 - cos(z_f, z_e), in [0, 2], zero at perfect
/// agreement. Minimizing it maximizes the similarity objective.
ad::Tensor l_sc(const ad::Tensor& z_f, const ad::Tensor& z_e);

} // namespace mrlmc
