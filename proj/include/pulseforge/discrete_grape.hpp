#pragma once

#include <cstdint>
#include <vector>

#include "pulseforge/discrete_pulse.hpp"
#include "pulseforge/grape.hpp"
#include "pulseforge/spin_dynamics.hpp"

namespace pulseforge {

/// Realize the pulse: theta_j = values[mapping[j]], reduced mod 2*pi.
/// Throws std::invalid_argument on an out-of-range index.
PhasePulse materialize(const DiscretePulse& dp);

struct DiscreteGrapeOptions {
    GrapeOptions grape;
    /// The mapping sub-step can be disabled, leaving a pure value ascent on a
    /// frozen mapping.
    bool sweep_enabled = true;

    DiscreteGrapeOptions() { grape.max_iters = 2000; }
};

/// Gradient with respect to the codebook values: component m is the sum of
/// the per-slice phase gradient over the slices mapped to m (0 for codebook
/// entries no slice uses).
std::vector<double> value_gradient(const EnsembleSpec& spec, const DiscretePulse& dp);

struct ValueUpdateResult {
    DiscretePulse pulse;
    double phi = 0.0;
    bool stalled = false;
};

/// One backtracking ascent step on the codebook values, mapping unchanged.
ValueUpdateResult update_values(const EnsembleSpec& spec, const DiscretePulse& dp,
                                const GrapeOptions& opt);

struct SweepResult {
    DiscretePulse pulse;
    double phi = 0.0;
    bool changed = false;
};

/// Greedy time-ordered mapping pass: for j = 1..N (in increasing order),
/// re-pick the codebook entry maximizing the full-pulse fidelity with slices
/// 1..j-1 already updated and slices j+1..N unchanged. Adjoint states are
/// precomputed from the pre-sweep pulse; since the sweep never touches the
/// tail ahead of the current slice, every candidate score is the exact
/// current fidelity, at cost O(N * M * n_off) per pass. The incumbent entry
/// is always among the candidates (and wins ties), so fidelity never
/// decreases.
SweepResult mapping_sweep(const EnsembleSpec& spec, const DiscretePulse& dp);

struct DiscreteResult {
    OptimizeTrace trace;
    DiscretePulse pulse;
    double phi = 0.0;
};

/// Alternate value updates and mapping sweeps until both sub-steps stall,
/// the improvement stays below tolerance, or max_iters.
DiscreteResult optimize_discrete(const EnsembleSpec& spec, const DiscretePulse& initial,
                                 const DiscreteGrapeOptions& opt);

/// Codebook values i.i.d. uniform on [0, 2*pi), mapping i.i.d. uniform on
/// the codebook; deterministic for a given seed (values drawn first).
DiscretePulse init_random(int n_steps, int M, std::uint64_t seed);

/// Codebook 2*pi*m/M for m = 0..M-1; the mapping comes from one greedy
/// forward sweep starting from the constant zero-phase pulse.
DiscretePulse init_uniform_forward(const EnsembleSpec& spec, int M);

} // namespace pulseforge
