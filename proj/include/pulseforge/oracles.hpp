#pragma once

#include <span>
#include <string>
#include <vector>

#include "pulseforge/spin_dynamics.hpp"

namespace pulseforge::oracles {

// Independent brute-force and finite-difference verifiers. These exist to
// check the optimizers from the outside: they share only the spin-dynamics
// primitives with the code they verify, and they only run at small scale.

/// Central finite differences of the ensemble fidelity in each slice phase,
/// using exact propagation. Cost O(N^2 * n_off).
std::vector<double> fd_gradient(const EnsembleSpec& spec, const PhasePulse& pulse, double h);

struct MappingSearchResult {
    std::vector<int> mapping; // 0-based codebook indices
    double phi = 0.0;
};

/// Exhaustive search over all M^N mappings for a fixed codebook. Refuses
/// instances with M^N > 10^6.
MappingSearchResult brute_force_mapping(const EnsembleSpec& spec,
                                        const std::vector<double>& values);

struct QuantizerSearchResult {
    std::vector<double> centroids;
    double distortion = 0.0;
};

/// Global minimum-distortion codebook over all partitions of the circularly
/// sorted phases into M contiguous arcs with arc-mean centroids (optimal 1-d
/// quantization cells are intervals, so contiguous arcs lose nothing).
/// Distortion is evaluated against the nearest centroid, the same quantity
/// the quantizer reports. Refuses N > 12 or M > 4.
QuantizerSearchResult exhaustive_quantizer(std::span<const double> phases, int M);

struct OracleReport {
    std::string oracle;
    std::string instance;
    double oracle_value = 0.0;
    double candidate_value = 0.0;
    double deviation = 0.0;
    bool pass = false;
};

} // namespace pulseforge::oracles
