#pragma once

#include <vector>

#include "mrlmc/autodiff.hpp"
#include "mrlmc/msc.hpp"

namespace mrlmc {

struct FocalConfig {
    double alpha_f = 0.25; // class-balance weight
    double gamma = 2.0;    // focusing exponent

    void validate() const;
};

struct LossWeights {
    double lambda1 = 1.0; // contrastive term
    double lambda2 = 1.0; // semantic-consistency term

    void validate() const;
};

/// Fusion classifier: concat(z_f, z_e) -> affine -> ReLU -> dropout ->
/// affine -> softmax over {CONTROL, DEPRESSED}. Hidden width m.
class FusionHead {
public:
    FusionHead(std::size_t m, double dropout, Rng& init_rng);

    /// Class probabilities, length 2, sums to 1.
    ad::Tensor forward(const ad::Tensor& z_f, const ad::Tensor& z_e, bool train,
                       Rng& rng) const;

    void collect_params(std::vector<ParamRef>& out, const std::string& prefix) const;

private:
    std::size_t m_;
    double dropout_;
    ad::Tensor w1_, b1_, w2_, b2_;
};

/// -alpha_f * (1 - P)^gamma * log(P) for the true-class probability P,
/// clamped at 1e-7.
ad::Tensor focal_loss(const ad::Tensor& p_true, const FocalConfig& cfg);
double focal_loss_value(double p_true, const FocalConfig& cfg);

/// lambda1 * l_msc + lambda2 * l_sc + l_fl.
ad::Tensor total_loss(const ad::Tensor& msc, const ad::Tensor& sc, const ad::Tensor& fl,
                      const LossWeights& w);

} // namespace mrlmc
