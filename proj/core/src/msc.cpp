#include "mrlmc/msc.hpp"

#include <cmath>

namespace mrlmc {

using ad::Tensor;

void MSCConfig::validate() const {
    if (n_scale < 1) throw ValidationError("msc: n_scale must be >= 1");
    if (n_out < 1) throw ValidationError("msc: n_out must be >= 1");
    if (d < 1) throw ValidationError("msc: d must be >= 1");
    if (alpha <= 0.0 || alpha > 1.0) throw ValidationError("msc: alpha must be in (0, 1]");
    if (dropout < 0.0 || dropout >= 1.0) throw ValidationError("msc: dropout must be in [0, 1)");
    if (kernel % 2 == 0) throw ValidationError("msc: kernel must be odd");
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

MSCEncoder::MSCEncoder(const MSCConfig& cfg, const std::map<Modality, std::size_t>& in_channels,
                       Rng& init_rng)
    : cfg_(cfg) {
    cfg_.validate();
    if (in_channels.empty()) throw ValidationError("msc: at least one modality required");

    for (const auto& [m, c_in] : in_channels) {
        adapter_w_.emplace(m, init_param({cfg_.d, c_in, 1}, c_in, init_rng));
        adapter_b_.emplace(m, init_param({cfg_.d}, c_in, init_rng));
    }
    embed_w_ = init_param({cfg_.d, cfg_.d, cfg_.kernel}, cfg_.d * cfg_.kernel, init_rng);
    embed_b_ = init_param({cfg_.d}, cfg_.d * cfg_.kernel, init_rng);

    branches_.resize(cfg_.n_scale);
    for (std::size_t i = 0; i < cfg_.n_scale; ++i) {
        auto& br = branches_[i];
        br.dilation = std::size_t{1} << i;
        br.scale_w = init_param({cfg_.d, cfg_.d, cfg_.kernel}, cfg_.d * cfg_.kernel, init_rng);
        br.scale_b = init_param({cfg_.d}, cfg_.d * cfg_.kernel, init_rng);
        br.block_w = init_param({cfg_.n_out, cfg_.d, cfg_.kernel}, cfg_.d * cfg_.kernel, init_rng);
        br.block_b = init_param({cfg_.n_out}, cfg_.d * cfg_.kernel, init_rng);
    }
}

Tensor MSCEncoder::adapter_forward(const Tensor& x, Modality modality, bool train,
                                   Rng& rng) const {
    auto it = adapter_w_.find(modality);
    if (it == adapter_w_.end())
        throw ValidationError("msc: no adapter configured for " + to_string(modality));
    if (x.shape().size() != 2 || x.shape()[0] != it->second.shape()[1])
        throw NumericError("msc adapter: channel count mismatch for " + to_string(modality));

    Tensor mapped = ad::conv1d(x, it->second, adapter_b_.at(modality), 1);
    Tensor latent = ad::relu(ad::conv1d(mapped, embed_w_, embed_b_, 1));
    return ad::dropout(latent, cfg_.dropout, train, rng);
}

Tensor MSCEncoder::adapter_forward(const Signal& signal, bool train, Rng& rng) const {
    Tensor x = Tensor::leaf({signal.channels, signal.timesteps}, signal.data);
    return adapter_forward(x, signal.modality, train, rng);
}

Tensor MSCEncoder::msc_forward(const Tensor& latent, bool train, Rng& rng) const {
    std::vector<Tensor> phis;
    phis.reserve(branches_.size());
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto& br = branches_[i];
        Tensor scaled = ad::relu(ad::conv1d(latent, br.scale_w, br.scale_b, br.dilation));
        scaled = ad::dropout(scaled, cfg_.dropout, train, rng);
        Tensor block = ad::conv1d(scaled, br.block_w, br.block_b, 1);
        Tensor pooled = ad::global_avg_pool(block);
        Tensor phi = ad::leaky_max(ad::layer_norm(pooled), cfg_.alpha);
        ad::check_finite(phi, "msc branch " + std::to_string(i));
        phis.push_back(phi);
    }
    return ad::concat(phis);
}

Tensor MSCEncoder::forward(const Signal& signal, bool train, Rng& rng) const {
    return msc_forward(adapter_forward(signal, train, rng), train, rng);
}

void MSCEncoder::collect_params(std::vector<ParamRef>& out, const std::string& prefix) const {
    for (const auto& [m, w] : adapter_w_)
        out.push_back({prefix + ".adapter." + to_string(m) + ".w", w});
    for (const auto& [m, b] : adapter_b_)
        out.push_back({prefix + ".adapter." + to_string(m) + ".b", b});
    out.push_back({prefix + ".embed.w", embed_w_});
    out.push_back({prefix + ".embed.b", embed_b_});
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const std::string base = prefix + ".branch" + std::to_string(i);
        out.push_back({base + ".scale.w", branches_[i].scale_w});
        out.push_back({base + ".scale.b", branches_[i].scale_b});
        out.push_back({base + ".block.w", branches_[i].block_w});
        out.push_back({base + ".block.b", branches_[i].block_b});
    }
}

} // namespace mrlmc
