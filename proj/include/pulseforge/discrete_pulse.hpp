#pragma once

#include <vector>

namespace pulseforge {

/// Quantized pulse: a codebook of M phase values plus a per-slice index into
/// it. Mapping entries are 0-based in memory (the on-disk format is 1-based).
struct DiscretePulse {
    std::vector<double> values;
    std::vector<int> mapping;

    int n_values() const { return static_cast<int>(values.size()); }
    int n_steps() const { return static_cast<int>(mapping.size()); }
};

} // namespace pulseforge
