#pragma once

#include <cstdint>

#include "pulseforge/angles.hpp"

namespace pulseforge {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// Counter-based stream split: realization r of a campaign draws from a
/// generator seeded with derive_seed(master, r). Distinct counters give
/// distinct seeds (splitmix64's finalizer is a bijection), so no two
/// realizations share a stream, and the scheme is independent of execution
/// order or worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return detail::splitmix64(master + counter * 0x9e3779b97f4a7c15ULL);
}

/// Small deterministic RNG (splitmix64). Self-contained so that streams are
/// identical across standard libraries and platforms.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform angle in [0, 2*pi).
    double next_angle() { return next_double() * two_pi; }

    /// Uniform integer in [0, bound); bound must be >= 1.
    std::uint32_t next_below(std::uint32_t bound) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

  private:
    std::uint64_t state_;
};

} // namespace pulseforge
