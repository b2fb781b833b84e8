#pragma once

#include <map>
#include <memory>
#include <vector>

#include "mrlmc/augment.hpp"
#include "mrlmc/contrastive.hpp"
#include "mrlmc/head.hpp"
#include "mrlmc/msc.hpp"
#include "mrlmc/semantic.hpp"

namespace mrlmc {

struct ModelConfig {
    MSCConfig msc;
    TransformerConfig transformer;
    FocalConfig focal;
    LossWeights weights;
    double head_dropout = 0.1;

    void validate() const;
};

/// Per-pair forward products; embeddings are kept so the embed exporter and
/// the contrastive batch builder share one pass.
struct PairForward {
    ad::Tensor v, u;     // spatio-temporal representations
    ad::Tensor z_f, z_e; // semantic features
    ad::Tensor probs;    // class probabilities, length 2
};

/// The full network: per-modality adapters + shared MSC trunk, shared
/// transformer stack, fusion head. In SINGLE modes both views run through the
/// same adapter; in MULTI mode x is fNIRS and y is EEG.
class Model {
public:
    Model(const ModelConfig& cfg, const std::map<Modality, std::size_t>& in_channels,
          std::uint64_t init_seed);

    PairForward forward_pair(const InputPair& pair, bool train, Rng& rng) const;

    /// Total objective over a minibatch of pairs; also returns the parts.
    struct BatchLoss {
        ad::Tensor total, msc, sc, fl;
        std::vector<PairForward> forwards;
    };
    BatchLoss batch_loss(const std::vector<InputPair>& batch, double temperature,
                         bool train, Rng& rng) const;

    Label predict(const InputPair& pair) const;

    std::vector<ParamRef> params() const;
    const ModelConfig& config() const { return cfg_; }
    const MSCEncoder& msc() const { return *msc_; }
    const SemanticEncoder& semantic() const { return *semantic_; }
    const FusionHead& head() const { return *head_; }

private:
    ModelConfig cfg_;
    std::unique_ptr<MSCEncoder> msc_;
    std::unique_ptr<SemanticEncoder> semantic_;
    std::unique_ptr<FusionHead> head_;
};

} // namespace mrlmc
