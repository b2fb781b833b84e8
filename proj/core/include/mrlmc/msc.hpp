#pragma once

#include <map>
#include <string>
#include <vector>

#include "mrlmc/autodiff.hpp"
#include "mrlmc/signal.hpp"

namespace mrlmc {

struct MSCConfig {
    std::size_t d = 16;       // embedding width
    std::size_t n_scale = 5;  // branch count
    std::size_t n_out = 32;   // per-branch output width
    double alpha = 0.3;       // control weight of the leaky-max aggregation
    double dropout = 0.1;
    std::size_t kernel = 3; // temporal kernel; branch i uses dilation 2^(i-1)

    std::size_t m() const { return n_scale * n_out; }
    void validate() const;
};

/// Named parameter handle; the tensor is a live leaf node shared with the
/// module that owns it.
struct ParamRef {
    std::string name;
    ad::Tensor tensor;
};

/// Multiscale spatio-temporal encoder. The temporal trunk (embedding
/// convolution, scale branches, blocks) is shared across modalities; only the
/// width-1 channel adapters are modality-specific because fNIRS and EEG have
/// different channel counts.
class MSCEncoder {
public:
    MSCEncoder(const MSCConfig& cfg, const std::map<Modality, std::size_t>& in_channels,
               Rng& init_rng);

    /// Width-1 adapter conv (channels -> d) followed by the shared temporal
    /// embedding convolution. Output is d x timesteps.
    ad::Tensor adapter_forward(const ad::Tensor& x, Modality modality, bool train,
                               Rng& rng) const;
    ad::Tensor adapter_forward(const Signal& signal, bool train, Rng& rng) const;

    /// Scale branches, blocks, and the leaky-max aggregation into the m-vector.
    ad::Tensor msc_forward(const ad::Tensor& latent, bool train, Rng& rng) const;

    ad::Tensor forward(const Signal& signal, bool train, Rng& rng) const;

    const MSCConfig& config() const { return cfg_; }
    void collect_params(std::vector<ParamRef>& out, const std::string& prefix) const;

private:
    struct Branch {
        ad::Tensor scale_w, scale_b; // d -> d, dilation 2^(i-1)
        ad::Tensor block_w, block_b; // d -> n_out
        std::size_t dilation = 1;
    };

    MSCConfig cfg_;
    std::map<Modality, ad::Tensor> adapter_w_; // [d, Cin, 1]
    std::map<Modality, ad::Tensor> adapter_b_; // [d]
    ad::Tensor embed_w_, embed_b_;             // shared f_enc
    std::vector<Branch> branches_;
};

} // namespace mrlmc
