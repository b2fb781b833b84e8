#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mrlmc/model.hpp"

namespace mrlmc {

struct GradCheckResult {
    std::string name;
    double max_rel_err = 0.0;
};

/// Central finite differences (step h) against backprop for a scalar-valued
/// forward over the given live parameters. The forward is re-run from scratch
/// for every probe, so the check is independent of any recorded tape.
double finite_diff_max_rel_err(const std::vector<ParamRef>& params,
                               const std::function<double()>& forward,
                               const std::function<void()>& backprop,
                               double step = 1e-4);

/// Runs every per-module finite-difference contract (adapter+MSC, attention,
/// transformer unit, fusion head, L_MSC, L_SC, L_FL, composed objective) on
/// small batches and returns the max relative error per module.
std::vector<GradCheckResult> gradcheck_all(std::uint64_t seed = 42);

} // namespace mrlmc
