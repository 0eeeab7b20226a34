#pragma once

#include <vector>

#include "pulseforge/spin_dynamics.hpp"

namespace pulseforge::serial {

/// Plain serial versions of the hot kernels. Same per-offset arithmetic and
/// the same fixed-order reductions as the OpenMP implementations, so results
/// must match those bit for bit; tests and the benchmark compare the two.
std::vector<Vec3> propagate_ensemble(const EnsembleSpec& spec, const PhasePulse& pulse);
double evaluate_phi(const EnsembleSpec& spec, const PhasePulse& pulse);
std::vector<double> phase_gradient(const EnsembleSpec& spec, const PhasePulse& pulse);

} // namespace pulseforge::serial
