#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace opticbm {

/// SplitMix64 generator (Steele, Lea & Flood). 64-bit state, period 2^64.
///
/// Stream derivation: the substream for index i under root seed s starts
/// from state mix(mix(s) + i), where mix is the SplitMix64 finalizer. The
/// simulator uses one substream per cycle index, so results do not depend
/// on how cycles are distributed across workers.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
        return SplitMix64(mix(mix(seed) + index));
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate by inversion; +inf when rate is 0.
    double exponential(double rate) noexcept {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log1p(-uniform()) / rate;
    }

private:
    std::uint64_t state_;
};

}  // namespace opticbm
