#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pulseforge/spin_dynamics.hpp"

namespace pulseforge {

/// Ascent parameters shared by the continuous optimizer and the discrete
/// value-update sub-step.
struct GrapeOptions {
    int max_iters = 5000;
    /// Trial step sizes are epsilon0 / max|g|, then shrunk by
    /// backtrack_factor until the figure of merit increases.
    double epsilon0 = 0.5;
    double backtrack_factor = 0.5;
    double min_step = 1e-12;
    /// Stop once the per-iteration improvement stays below tol_delta_phi for
    /// `patience` consecutive iterations.
    double tol_delta_phi = 1e-8;
    int patience = 5;

    void validate() const;
};

enum class Termination { converged, stalled, max_iters };
const char* to_string(Termination t);

/// Figure-of-merit history of one optimization run. phi.front() is the value
/// of the initial pulse; one entry follows per iteration. The sequence is
/// non-decreasing.
struct OptimizeTrace {
    std::vector<double> phi;
    int iterations = 0;
    Termination reason = Termination::max_iters;
};

struct ContinuousResult {
    OptimizeTrace trace;
    PhasePulse pulse;
    double phi = 0.0;
};

/// First-order gradient of the ensemble fidelity with respect to each slice
/// phase: g_j = (dt / n_off) sum_w lambda_j . (dOmega_j/dtheta x M_j), with
/// the states taken at the start of slice j. Accurate to O(|Omega| dt)
/// relative; validated against central finite differences.
std::vector<double> phase_gradient(const EnsembleSpec& spec, const PhasePulse& pulse);

struct LineSearchResult {
    double epsilon = 0.0;
    PhasePulse pulse;
    double phi = 0.0;
    bool stalled = false;
};

/// First step size in {e0, e0*b, e0*b^2, ...} that strictly increases phi;
/// new phases are reduced mod 2*pi. Below min_step the original pulse is
/// returned with the stall flag set.
LineSearchResult line_search(const EnsembleSpec& spec, const PhasePulse& pulse,
                             const std::vector<double>& gradient, const GrapeOptions& opt);

ContinuousResult optimize_continuous(const EnsembleSpec& spec, const PhasePulse& initial,
                                     const GrapeOptions& opt);

/// Adiabatic-inspired initial guess theta(t) = (pi/2) (2 t / tf - 1)^2,
/// sampled at slice midpoints.
PhasePulse parabolic_initial_pulse(const EnsembleSpec& spec);

namespace detail {

struct BacktrackResult {
    double epsilon = 0.0;
    std::vector<double> x;
    double phi = 0.0;
    bool stalled = false;
};

/// Backtracking ascent step on a vector of angles; shared by the continuous
/// line search and the discrete value update so the two are step-for-step
/// identical when the parameterizations coincide.
BacktrackResult backtrack_ascent(const std::vector<double>& x0, const std::vector<double>& g,
                                 double phi0,
                                 const std::function<double(const std::vector<double>&)>& eval,
                                 const GrapeOptions& opt);

} // namespace detail

} // namespace pulseforge
