#pragma once

#include <array>
#include <string>
#include <vector>

#include "mrlmc/signal.hpp"

namespace mrlmc {

struct EpochTrace {
    int epoch = 0;
    double total = 0.0, msc = 0.0, sc = 0.0, fl = 0.0;
    double val_macro_f1 = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    // confusion[true][pred]
    std::array<std::array<std::size_t, 2>, 2> confusion = {{{0, 0}, {0, 0}}};
    std::vector<EpochTrace> trace;

    std::string to_json() const;
};

/// Macro metrics = unweighted mean over the two classes; a class with an
/// empty precision/recall denominator contributes 0.
MetricsReport compute_metrics(const std::vector<Label>& predicted,
                              const std::vector<Label>& truth);

} // namespace mrlmc
