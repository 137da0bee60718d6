// ============================================================================
// stlf/rng.hpp — deterministic random number generation
// ============================================================================
//
// Every random decision in the project flows from a single 64-bit seed
// through SplitMix64 (Steele, Lea & Flood, "Fast splittable pseudorandom
// number generators", OOPSLA 2014).  The generator and all derived
// distributions below are defined bit-for-bit by this header, so campaigns
// replay identically across platforms and standard-library versions.
// std::uniform_*_distribution is deliberately not used: its output is
// implementation-defined.
//
// ============================================================================

#pragma once

#include <cmath>
#include <cstdint>

namespace stlf {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform index in [0, n).  Lemire multiply-shift; n must be > 0.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool chance(double p) { return unit() < p; }

    /// Standard normal via Box-Muller (consumes exactly two raw draws).
    double gauss() {
        double u1 = unit();
        double u2 = unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Derive an independent child stream, e.g. one per campaign phase.
    Rng child(std::uint64_t index) const {
        Rng mix(state_ ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        return Rng(mix.next_u64());
    }

private:
    std::uint64_t state_;
};

}  // namespace stlf
