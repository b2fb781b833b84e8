#include "mrlmc/contrastive.hpp"

#include <cmath>

namespace mrlmc {

using ad::Tensor;

void PairBatch::validate() const {
    if (items.size() % 2 != 0) throw ValidationError("contrastive: item count must be even");
    if (pairs() < 2)
        throw ValidationError("contrastive: batch must hold N >= 2 pairs (no negatives otherwise)");
    if (temperature <= 0.0) throw ValidationError("contrastive: temperature must be > 0");
}

ad::Tensor l_msc(const PairBatch& batch) {
    batch.validate();
    const std::size_t n_items = batch.items.size();
    const double inv_tau = 1.0 / batch.temperature;

    // exp(sim/tau) for every unordered pair, computed once
    std::vector<Tensor> sim_exp(n_items * n_items);
    for (std::size_t i = 0; i < n_items; ++i)
        for (std::size_t j = i + 1; j < n_items; ++j) {
            Tensor e = ad::exp_t(ad::scale(ad::cosine_sim(batch.items[i], batch.items[j]), inv_tau));
            sim_exp[i * n_items + j] = e;
            sim_exp[j * n_items + i] = e;
        }

    std::vector<Tensor> anchor_losses;
    anchor_losses.reserve(n_items);
    for (std::size_t i = 0; i < n_items; ++i) {
        const std::size_t positive = i ^ 1;
        std::vector<Tensor> denom_terms;
        denom_terms.reserve(n_items - 1);
        denom_terms.push_back(sim_exp[i * n_items + positive]);
        for (std::size_t j = 0; j < n_items; ++j)
            if (j != i && j != positive) denom_terms.push_back(sim_exp[i * n_items + j]);
        Tensor denom = ad::sum(ad::concat(denom_terms));
        Tensor ratio = ad::mul(sim_exp[i * n_items + positive], ad::pow_t(denom, -1.0));
        anchor_losses.push_back(ad::scale(ad::log_t(ratio), -1.0));
    }
    return ad::mean(ad::concat(anchor_losses));
}

double cosine_sim_value(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw NumericError("cosine_sim: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw NumericError("cosine_sim: zero-norm input");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace mrlmc
