#pragma once

#include <cstdint>
#include <vector>

#include "mrlmc/rng.hpp"
#include "mrlmc/signal.hpp"

namespace mrlmc {

enum class AugmentMethod { MASK, WARP };

struct AugmentSpec {
    AugmentMethod method = AugmentMethod::MASK;
    double lambda_s = 0.0; // <= t_q; 0 means "use t_q"
    double warp_lo = 0.8;
    double warp_hi = 1.25;
    double probability = 0.5; // chance a side is augmented in MULTI mode
    std::uint64_t seed = 0;

    void validate(const TaskMeta& task) const;
};

/// Draw used by both augmentations: a question window index, an offset t0 and
/// a width, with t0 + width <= t_q so the segment stays inside one question.
struct WindowDraw {
    int question = 0;
    double t0 = 0.0;
    double width = 0.0;
    double warp_factor = 1.0;
};

WindowDraw draw_window(const TaskMeta& task, const AugmentSpec& spec, Rng& rng);

/// Replaces samples in the drawn window (all channels) with the per-channel
/// mean of the unmasked region; everything else is bit-identical.
Signal time_mask(const Signal& signal, const TaskMeta& task, const AugmentSpec& spec,
                 Rng& rng);

/// Locally re-times the drawn window by the drawn factor (monotone linear
/// time map) and resamples back to the original length.
Signal time_warp(const Signal& signal, const TaskMeta& task, const AugmentSpec& spec,
                 Rng& rng);

/// The monotone sample-index map used by time_warp; exposed so tests can
/// check strict monotonicity directly.
std::vector<double> warp_time_map(std::size_t timesteps, std::size_t w_start,
                                  std::size_t w_len, double factor);

enum class InputMode { SINGLE_FNIRS, SINGLE_EEG, MULTI };

std::string to_string(InputMode m);
InputMode input_mode_from_string(const std::string& s);

/// One contrastive input pair: x and y views plus the carried label.
struct InputPair {
    Signal x;
    Signal y;
    Label label = Label::CONTROL;
    std::string subject_id;
};

/// SINGLE modes: x = raw, y = augmented copy. MULTI: x = fNIRS, y = EEG with
/// augmentation applied to each side independently with spec.probability.
/// Deterministic in (records order, spec.seed).
std::vector<InputPair> build_input_pairs(const std::vector<Record>& records,
                                         InputMode mode, const AugmentSpec& spec);

} // namespace mrlmc
