#pragma once

#include <cmath>
#include <vector>

#include "pulseforge/vec3.hpp"

namespace pulseforge {

struct EnsembleSpec;

/// Per-offset rotation constants for one time slice length dt.
///
/// For a phase-only control the slice field is
///   Omega = (omega0*cos(theta), omega0*sin(theta), offset),
/// whose magnitude sqrt(omega0^2 + offset^2) does not depend on theta. The
/// rotation angle, its trig values and the axis normalization can therefore
/// be computed once per offset and reused for every slice and every
/// candidate phase; only the azimuthal axis direction (cos theta, sin theta)
/// changes. This is the hot path of every propagation, gradient and sweep.
struct OffsetRotation {
    double omega = 0.0;   // offset (rad/s)
    double s = 0.0;       // omega0 / |Omega|, axis xy scale
    double nz = 0.0;      // offset / |Omega|
    double sin_a = 0.0;   // sin(|Omega| dt)
    double omc = 0.0;     // 1 - cos(|Omega| dt), computed as 2 sin^2(a/2)
    double cos_a = 1.0;   // 1 - omc
    bool taylor = false;  // |Omega| dt below threshold: quadratic Taylor step
};

/// Below this rotation angle the Rodrigues coefficients lose precision
/// (and the axis is 0/0 at exactly zero field), so a second-order Taylor
/// step is used instead.
inline constexpr double small_angle_threshold = 1e-8;

inline OffsetRotation make_offset_rotation(double offset, double omega0, double dt) {
    OffsetRotation r;
    r.omega = offset;
    const double mag = std::sqrt(omega0 * omega0 + offset * offset);
    const double alpha = mag * dt;
    if (alpha < small_angle_threshold) {
        r.taylor = true;
        return r;
    }
    r.s = omega0 / mag;
    r.nz = offset / mag;
    const double sh = std::sin(0.5 * alpha);
    r.omc = 2.0 * sh * sh;
    r.cos_a = 1.0 - r.omc;
    r.sin_a = std::sin(alpha);
    return r;
}

std::vector<OffsetRotation> make_rotation_table(const EnsembleSpec& spec);

/// Advance one Bloch vector through one slice with phase (ct, st) =
/// (cos theta, sin theta). `sign` is +1 for forward evolution and -1 for the
/// inverse rotation used by adjoint propagation.
inline Vec3 apply_slice(const OffsetRotation& r, double omega0, double dt,
                        double ct, double st, Vec3 m, double sign) {
    if (r.taylor) {
        const Vec3 w{omega0 * ct * sign, omega0 * st * sign, r.omega * sign};
        const Vec3 c1 = cross(w, m);
        const Vec3 c2 = cross(w, c1);
        return m + dt * c1 + (0.5 * dt * dt) * c2;
    }
    const Vec3 n{r.s * ct, r.s * st, r.nz};
    const double sa = sign * r.sin_a;
    const Vec3 c = cross(n, m);
    const double p = r.omc * dot(n, m);
    return {r.cos_a * m.x + sa * c.x + p * n.x,
            r.cos_a * m.y + sa * c.y + p * n.y,
            r.cos_a * m.z + sa * c.z + p * n.z};
}

} // namespace pulseforge
