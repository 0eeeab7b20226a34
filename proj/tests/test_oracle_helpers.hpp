#pragma once

// Test-only reference integrators, independent of the library's Rodrigues
// propagation path: a dense matrix exponential of the 3x3 cross-product
// generator, and an RK4 integrator with substeps.

#include <array>
#include <cmath>

#include "pulseforge/spin_dynamics.hpp"

namespace testutil {

using pulseforge::Vec3;

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline Mat3 mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

inline Mat3 add(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline Mat3 scale(const Mat3& a, double s) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] * s;
    return c;
}

inline double max_abs(const Mat3& a) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a[i][j]));
    return m;
}

/// exp(A) by scaling-and-squaring with a Taylor series.
inline Mat3 expm(Mat3 a) {
    int squarings = 0;
    while (max_abs(a) > 0.25) {
        a = scale(a, 0.5);
        ++squarings;
    }
    Mat3 result = identity();
    Mat3 term = identity();
    for (int k = 1; k <= 24; ++k) {
        term = scale(mul(term, a), 1.0 / k);
        result = add(result, term);
    }
    for (int s = 0; s < squarings; ++s) result = mul(result, result);
    return result;
}

/// Exact one-slice propagator via exp(dt * [omega]_x) applied densely.
inline Vec3 expm_step(Vec3 m, Vec3 omega, double dt) {
    const Mat3 gen = {{{0.0, -omega.z * dt, omega.y * dt},
                       {omega.z * dt, 0.0, -omega.x * dt},
                       {-omega.y * dt, omega.x * dt, 0.0}}};
    const Mat3 r = expm(gen);
    return {r[0][0] * m.x + r[0][1] * m.y + r[0][2] * m.z,
            r[1][0] * m.x + r[1][1] * m.y + r[1][2] * m.z,
            r[2][0] * m.x + r[2][1] * m.y + r[2][2] * m.z};
}

/// RK4 on dM/dt = omega x M with `substeps` steps over one slice.
inline Vec3 rk4_step(Vec3 m, Vec3 omega, double dt, int substeps) {
    const double h = dt / substeps;
    const auto f = [&](Vec3 v) { return cross(omega, v); };
    for (int s = 0; s < substeps; ++s) {
        const Vec3 k1 = f(m);
        const Vec3 k2 = f(m + (0.5 * h) * k1);
        const Vec3 k3 = f(m + (0.5 * h) * k2);
        const Vec3 k4 = f(m + h * k3);
        m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return m;
}

/// Full-pulse RK4 propagation of one isochromat.
inline Vec3 rk4_propagate(const pulseforge::EnsembleSpec& spec, const pulseforge::PhasePulse& pulse,
                          double offset, int substeps) {
    Vec3 m = spec.initial;
    for (int j = 0; j < spec.n_steps; ++j) {
        const Vec3 w = pulseforge::effective_field(pulse.theta[j], offset, spec.omega0);
        m = rk4_step(m, w, spec.dt, substeps);
    }
    return m;
}

inline double dist(Vec3 a, Vec3 b) { return pulseforge::norm(a - b); }

} // namespace testutil
