#pragma once

#include <span>
#include <vector>

#include "pulseforge/vec3.hpp"

namespace pulseforge {

/// Phase-only control: one phase angle per time slice, each in [0, 2*pi).
struct PhasePulse {
    std::vector<double> theta;

    int n_steps() const { return static_cast<int>(theta.size()); }
};

/// Reduce every phase to [0, 2*pi).
PhasePulse wrapped(PhasePulse p);

/// Inhomogeneous inversion problem: ensemble of isochromats with distinct
/// resonance offsets, driven by one shared constant-amplitude phase pulse.
struct EnsembleSpec {
    std::vector<double> offsets;  // rad/s, ascending
    double omega0 = 0.0;          // control amplitude, rad/s
    double tf = 0.0;              // total duration, s
    int n_steps = 0;              // N
    double dt = 0.0;              // tf / N, s
    Vec3 initial{0.0, 0.0, 1.0};
    Vec3 target{0.0, 0.0, -1.0};

    int n_offsets() const { return static_cast<int>(offsets.size()); }

    /// Throws std::invalid_argument on inconsistent fields
    /// (unsorted offsets, dt*n_steps != tf beyond 1e-12 relative, ...).
    void validate() const;

    /// n_off offsets equally spaced over [-omega_max, +omega_max], endpoints
    /// included; a single offset sits on resonance (0).
    static std::vector<double> symmetric_offsets(int n_off, double omega_max);

    /// Broadband inversion problem: start at +z, target -z.
    static EnsembleSpec inversion(double omega_max, double omega0, double tf,
                                  double dt, int n_off);
};

/// Forward and adjoint states of every isochromat on the full time grid.
/// Layout: state(i, j) with offset index i and time index j = 0..N;
/// forward(i, 0) is the initial state, adjoint(i, N) the target. The scalar
/// dot(adjoint(i,j), forward(i,j)) is independent of j for a fixed pulse.
struct PropagationRecord {
    int n_offsets = 0;
    int n_steps = 0;
    std::vector<Vec3> forward;
    std::vector<Vec3> adjoint;

    const Vec3& fwd(int off, int j) const { return forward[static_cast<std::size_t>(off) * (n_steps + 1) + j]; }
    const Vec3& adj(int off, int j) const { return adjoint[static_cast<std::size_t>(off) * (n_steps + 1) + j]; }
};

/// Rotating-frame effective field for one slice:
/// (omega0 cos theta, omega0 sin theta, offset).
Vec3 effective_field(double theta, double offset, double omega0);

/// Exact propagation of m over one slice of constant field: rotation about
/// omega_eff by |omega_eff|*dt (second-order Taylor step below the small
/// angle threshold; identity for zero field).
Vec3 step_propagate(const Vec3& m, const Vec3& omega_eff, double dt);

/// Final Bloch vectors, one per offset.
std::vector<Vec3> propagate_ensemble(const EnsembleSpec& spec, const PhasePulse& pulse);

/// Adjoint states: the target pulled back to every grid time with inverse
/// rotations. Layout matches PropagationRecord (offset-major, N+1 per offset).
std::vector<Vec3> adjoint_propagate(const EnsembleSpec& spec, const PhasePulse& pulse);

/// Forward and adjoint states on the full grid (used by gradients and the
/// duality checks).
PropagationRecord propagate_record(const EnsembleSpec& spec, const PhasePulse& pulse);

/// Ensemble figure of merit: mean over offsets of dot(final, target).
/// Fixed-order pairwise reduction; bit-reproducible across thread counts.
double ensemble_fidelity(std::span<const Vec3> finals, Vec3 target);

/// Fidelity of the pulse on the ensemble.
double evaluate_phi(const EnsembleSpec& spec, const PhasePulse& pulse);

} // namespace pulseforge
