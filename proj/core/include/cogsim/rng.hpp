#pragma once
#include <cstdint>

namespace cogsim {

// Deterministic 64-bit generator (splitmix64). Hand-rolled instead of
// <random> engines so that streams are bit-identical across platforms and
// standard library implementations.
class Rng {
public:
    Rng() = default;

    // `stream` selects an independent substream of the same seed.
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(seed + 0x9e3779b97f4a7c15ull * (stream + 1)) {
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Uniform integer in [0, n). Modulo bias is negligible for the small n
    // used here and keeps the draw count per call fixed.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

    bool operator==(const Rng&) const = default;

private:
    std::uint64_t state_ = 0x853c49e6748fea9bull;
};

} // namespace cogsim
