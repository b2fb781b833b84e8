#pragma once

#include <cmath>
#include <cstdint>

namespace mrlmc {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// needed so results are bit-identical across platforms and standard libraries;
/// std:: distributions are implementation-defined and would break the
/// reproducibility contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller (always consumes two uniforms).
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    /// Independent stream for a sub-task; mixing keeps per-item streams
    /// decorrelated from the parent sequence.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0x5851f42d4c957f2dULL * (index + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

/// Seeded Fisher-Yates shuffle of an index container.
template <typename Container>
void shuffle(Container& items, Rng& rng) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform_index(i + 1));
        std::swap(items[i], items[j]);
    }
}

} // namespace mrlmc
