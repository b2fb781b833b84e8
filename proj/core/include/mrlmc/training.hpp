#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "mrlmc/augment.hpp"
#include "mrlmc/metrics.hpp"
#include "mrlmc/model.hpp"

namespace mrlmc {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 16; // pair count N per contrastive batch
    std::size_t epochs = 100;
    std::size_t early_stop_patience = 20;
    double rms_decay = 0.99; // RMSProp squared-gradient averaging
    double rms_eps = 1e-8;
    double temperature = 0.2;
    std::uint64_t seed = 0;
    double train_fraction = 0.7;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    InputMode mode = InputMode::MULTI;
    AugmentSpec augment;
    ModelConfig model;

    void validate() const;
};

struct Split {
    std::vector<Record> train, val, test;
};

/// Stratified by label, disjoint, deterministic in seed. Every class needs
/// at least 3 records so each split can see it.
Split split_dataset(const std::vector<Record>& records,
                    double train_fraction, double val_fraction, double test_fraction,
                    std::uint64_t seed);

struct TrainResult {
    std::shared_ptr<Model> model; // best-validation parameters, f32-rounded
    MetricsReport test_metrics;
    std::vector<EpochTrace> trace;
};

/// Minibatch RMSProp over the composed objective with validation-based model
/// selection (macro F1) and early stopping. Deterministic in (config, data).
TrainResult train(const TrainConfig& config, const std::vector<Record>& records);

/// Dropout-free forward, argmax prediction (ties predict CONTROL).
MetricsReport evaluate(const Model& model, const std::vector<Record>& records,
                       InputMode mode);

struct AblationRow {
    bool use_msc = false, use_sc = false;
    MetricsReport metrics;
};

/// Loss-term ablation: {FL only, MSC+FL, SC+FL, all}, shared seed and splits.
std::vector<AblationRow> ablate(const TrainConfig& config, const std::vector<Record>& records,
                                unsigned threads = 1);

struct SweepRow {
    std::size_t n_scale = 0, n_trans = 0, n_head = 0;
    bool feasible = true;
    MetricsReport metrics;
};

struct SweepGrid {
    std::vector<std::size_t> n_scale = {4, 5, 6};
    std::vector<std::size_t> n_trans = {1, 2, 3};
    std::vector<std::size_t> n_head = {4, 8, 16, 32};
};

/// One row per grid point with shared seed/splits; infeasible head counts are
/// flagged rather than run. Cells may run in parallel threads (MRLMC_THREADS).
std::vector<SweepRow> sweep(const TrainConfig& config, const std::vector<Record>& records,
                            const SweepGrid& grid, unsigned threads = 1);

} // namespace mrlmc
