#pragma once

#include <cmath>
#include <numbers>

namespace pulseforge {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2*pi). Handles negatives and the rounding case
/// where fmod of a tiny negative lands exactly on 2*pi.
inline double wrap_two_pi(double a) {
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    if (r < 0.0) r = 0.0;
    return r;
}

} // namespace pulseforge
