#pragma once

#include <vector>

#include "mrlmc/autodiff.hpp"

namespace mrlmc {

/// 2N embeddings interleaved by pair: items[2k] is the v-side and
/// items[2k+1] the u-side of pair k, so the positive partner of item i is
/// i ^ 1. Negatives for an anchor are all other 2N-2 items.
struct PairBatch {
    std::vector<ad::Tensor> items;
    double temperature = 0.2;

    std::size_t pairs() const { return items.size() / 2; }
    void validate() const;
};

/// Temperature-scaled contrastive loss: per anchor,
/// -log( exp(sim+/tau) / (exp(sim+/tau) + sum_neg exp(sim/tau)) ),
/// averaged over all 2N anchors (both directions).
ad::Tensor l_msc(const PairBatch& batch);

/// Plain-double cosine similarity used outside of graphs.
double cosine_sim_value(const std::vector<double>& a, const std::vector<double>& b);

} // namespace mrlmc
