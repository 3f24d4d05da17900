#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mlsol {

/// Mixes a base seed with stream coordinates (repeat, fold, member ...) into a new seed.
/// SplitMix64 finalizer; stable across platforms.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return mix_seed(mix_seed(mix_seed(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// Reproducible random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++ standard. The
/// conversions to reals and bounded integers are done here rather than through the
/// <random> distributions, whose algorithms are implementation-defined. Together this
/// makes every draw identical across compilers and platforms for a given seed.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive. Unbiased (rejection sampling).
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return static_cast<std::size_t>(x % bound);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace mlsol
