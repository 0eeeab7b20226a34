#pragma once

#include <cstddef>
#include <span>

namespace pulseforge {

/// Fixed-order pairwise sum. The reduction tree depends only on the length,
/// never on thread count or scheduling, so ensemble reductions are
/// bit-reproducible.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 4) {
        double s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace pulseforge
