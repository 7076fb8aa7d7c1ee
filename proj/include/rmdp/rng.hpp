#pragma once

#include <cstdint>
#include <limits>

namespace rmdp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the k-th draw of a stream is mix64(key + k * phi),
/// so any draw is addressable without replaying the stream. Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    /// Independent stream for substream `index` of a root seed.
    static constexpr CounterRng stream(std::uint64_t seed, std::uint64_t index) noexcept {
        return CounterRng(mix64(seed) ^ index);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGolden);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rmdp
