#pragma once

#include <span>
#include <vector>

#include "pulseforge/discrete_pulse.hpp"

namespace pulseforge {

// Scalar quantization on the circle [0, 2*pi). Purely geometric: nothing in
// this module looks at spin dynamics; the quantizer sees only the phase
// values themselves.

/// Symmetric circular distance, in [0, pi].
double circular_distance(double a, double b);

/// Quantizer state after `iterations` passes. Centroids and boundaries are
/// each sorted ascending within one period; bin j is the arc
/// [boundaries[j], boundaries[j+1]) with the last arc wrapping around.
struct CircularCodebook {
    std::vector<double> centroids;
    std::vector<double> boundaries;
    int iterations = 0;
    double distortion = 0.0;
};

/// Initial boundaries: M points centered between the uniform codebook
/// positions 2*pi*m/M, i.e. 2*pi*(m + 1/2)/M.
std::vector<double> uniform_boundaries(int M);

/// Per-arc mean of the phases falling in each boundary arc, computed after
/// unwrapping members into a contiguous interval starting at the arc's lower
/// boundary (so arcs crossing 2*pi average correctly). An empty arc keeps
/// fallback[j]; the overload without fallback uses the arc midpoints.
/// Results are reduced mod 2*pi and sorted.
std::vector<double> bin_means(std::span<const double> phases,
                              std::span<const double> boundaries,
                              std::span<const double> fallback);
std::vector<double> bin_means(std::span<const double> phases,
                              std::span<const double> boundaries);

/// Sum over the phases of the circular distance to the nearest centroid.
double distortion(std::span<const double> phases, std::span<const double> centroids);

/// Midpoints of adjacent centroids on the circle (the last boundary halves
/// the arc from the last centroid back to the first), reduced mod 2*pi and
/// sorted.
std::vector<double> update_boundaries(std::span<const double> centroids);

/// Index of the nearest centroid; lowest index on ties.
int nearest_centroid(double phase, std::span<const double> centroids);

struct LloydResult {
    CircularCodebook codebook;
    std::vector<double> quantized;        // per-input nearest-centroid value
    std::vector<double> distortion_trace; // J_1, J_2, ...
};

/// Alternate bin means and midpoint boundaries until the distortion change
/// drops to epsilon (or max_iters), then project every phase onto the final
/// codebook. Input phases are reduced mod 2*pi first.
LloydResult run_lloyd(std::span<const double> phases, int M, double epsilon, int max_iters);

/// Same, but starting from caller-supplied boundaries (sorted, in [0, 2*pi)).
LloydResult run_lloyd(std::span<const double> phases, int M, double epsilon, int max_iters,
                      std::vector<double> initial_boundaries);

/// Rebuild a discrete pulse from a quantized phase sequence: codebook =
/// centroids, mapping = index of each quantized value. Every quantized value
/// must be a codebook member.
DiscretePulse to_discrete_pulse(std::span<const double> quantized,
                                std::span<const double> centroids);

} // namespace pulseforge
