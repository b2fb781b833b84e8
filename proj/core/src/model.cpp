#include "mrlmc/model.hpp"

namespace mrlmc {

using ad::Tensor;

void ModelConfig::validate() const {
    msc.validate();
    transformer.validate(msc.n_scale, msc.n_out);
    focal.validate();
    weights.validate();
    if (head_dropout < 0.0 || head_dropout >= 1.0)
        throw ValidationError("head: dropout must be in [0, 1)");
}

Model::Model(const ModelConfig& cfg, const std::map<Modality, std::size_t>& in_channels,
             std::uint64_t init_seed)
    : cfg_(cfg) {
    cfg_.validate();
    Rng rng(init_seed);
    msc_ = std::make_unique<MSCEncoder>(cfg_.msc, in_channels, rng);
    semantic_ = std::make_unique<SemanticEncoder>(cfg_.transformer, cfg_.msc.n_scale,
                                                  cfg_.msc.n_out, rng);
    head_ = std::make_unique<FusionHead>(cfg_.msc.m(), cfg_.head_dropout, rng);
}

PairForward Model::forward_pair(const InputPair& pair, bool train, Rng& rng) const {
    PairForward f;
    f.v = msc_->forward(pair.x, train, rng);
    f.u = msc_->forward(pair.y, train, rng);
    f.z_f = semantic_->forward(f.v, train, rng);
    f.z_e = semantic_->forward(f.u, train, rng);
    f.probs = head_->forward(f.z_f, f.z_e, train, rng);
    return f;
}

Model::BatchLoss Model::batch_loss(const std::vector<InputPair>& batch, double temperature,
                                   bool train, Rng& rng) const {
    if (batch.size() < 2)
        throw ValidationError("batch: contrastive loss needs N >= 2 pairs");

    BatchLoss out;
    PairBatch contrast;
    contrast.temperature = temperature;
    std::vector<Tensor> sc_terms, fl_terms;
    for (const auto& pair : batch) {
        PairForward f = forward_pair(pair, train, rng);
        contrast.items.push_back(f.v);
        contrast.items.push_back(f.u);
        sc_terms.push_back(l_sc(f.z_f, f.z_e));
        fl_terms.push_back(
            focal_loss(ad::pick(f.probs, static_cast<std::size_t>(pair.label)), cfg_.focal));
        out.forwards.push_back(std::move(f));
    }
    out.msc = l_msc(contrast);
    out.sc = ad::mean(ad::concat(sc_terms));
    out.fl = ad::mean(ad::concat(fl_terms));
    out.total = total_loss(out.msc, out.sc, out.fl, cfg_.weights);
    ad::check_finite(out.total, "total loss");
    return out;
}

Label Model::predict(const InputPair& pair) const {
    Rng rng(0); // eval mode draws nothing
    PairForward f = forward_pair(pair, /*train=*/false, rng);
    // tie at 0.5 predicts CONTROL (lower label index)
    return f.probs.value()[1] > f.probs.value()[0] ? Label::DEPRESSED : Label::CONTROL;
}

std::vector<ParamRef> Model::params() const {
    std::vector<ParamRef> out;
    msc_->collect_params(out, "msc");
    semantic_->collect_params(out, "semantic");
    head_->collect_params(out, "head");
    return out;
}

} // namespace mrlmc
