#pragma once

#include <cstdint>

namespace postsel {

/// Counter-based generator built on the SplitMix64 finalizer. Output i of
/// stream s under seed q is mix(base(q, s) + i * GOLDEN), so any draw is a
/// pure function of (seed, stream, counter): substreams can be evaluated in
/// any order, or in parallel, with identical results.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix(mix(seed) ^ mix(stream ^ 0x5851F42D4C957F2Dull))) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix(base_ + (counter_++) * 0x9E3779B97F4A7C15ull); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next_u64(); }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace postsel
