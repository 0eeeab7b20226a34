#include "pulseforge/serial_reference.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseforge/rotation_table.hpp"
#include "pulseforge/summation.hpp"

namespace pulseforge::serial {

std::vector<Vec3> propagate_ensemble(const EnsembleSpec& spec, const PhasePulse& pulse) {
    if (pulse.n_steps() != spec.n_steps)
        throw std::invalid_argument("pulse length does not match spec.n_steps");
    const auto table = make_rotation_table(spec);
    const int n = spec.n_steps;
    std::vector<double> c(n), s(n);
    for (int j = 0; j < n; ++j) {
        c[j] = std::cos(pulse.theta[j]);
        s[j] = std::sin(pulse.theta[j]);
    }
    std::vector<Vec3> finals(spec.n_offsets());
    for (int i = 0; i < spec.n_offsets(); ++i) {
        Vec3 m = spec.initial;
        for (int j = 0; j < n; ++j)
            m = apply_slice(table[i], spec.omega0, spec.dt, c[j], s[j], m, 1.0);
        finals[i] = m;
    }
    return finals;
}

double evaluate_phi(const EnsembleSpec& spec, const PhasePulse& pulse) {
    const auto finals = serial::propagate_ensemble(spec, pulse);
    std::vector<double> contrib(finals.size());
    for (std::size_t i = 0; i < finals.size(); ++i) contrib[i] = dot(finals[i], spec.target);
    return pairwise_sum(contrib) / static_cast<double>(finals.size());
}

std::vector<double> phase_gradient(const EnsembleSpec& spec, const PhasePulse& pulse) {
    if (pulse.n_steps() != spec.n_steps)
        throw std::invalid_argument("pulse length does not match spec.n_steps");
    const auto table = make_rotation_table(spec);
    const int n = spec.n_steps;
    const int n_off = spec.n_offsets();
    std::vector<double> c(n), s(n);
    for (int j = 0; j < n; ++j) {
        c[j] = std::cos(pulse.theta[j]);
        s[j] = std::sin(pulse.theta[j]);
    }

    // forward states at the start of every slice, then adjoints pulled back,
    // accumulating lambda . (dOmega/dtheta x M) per slice.
    std::vector<std::vector<Vec3>> fwd(n_off, std::vector<Vec3>(n + 1));
    for (int i = 0; i < n_off; ++i) {
        fwd[i][0] = spec.initial;
        for (int j = 0; j < n; ++j)
            fwd[i][j + 1] = apply_slice(table[i], spec.omega0, spec.dt, c[j], s[j], fwd[i][j], 1.0);
    }

    std::vector<double> contrib(static_cast<std::size_t>(n_off) * std::max(n, 1));
    for (int i = 0; i < n_off; ++i) {
        Vec3 lambda = spec.target;
        for (int j = n; j > 0; --j) {
            lambda = apply_slice(table[i], spec.omega0, spec.dt, c[j - 1], s[j - 1], lambda, -1.0);
            const Vec3 dw{-spec.omega0 * s[j - 1], spec.omega0 * c[j - 1], 0.0};
            contrib[static_cast<std::size_t>(i) * n + (j - 1)] = dot(lambda, cross(dw, fwd[i][j - 1]));
        }
    }

    std::vector<double> g(n);
    const double scale = spec.dt / static_cast<double>(n_off);
    std::vector<double> col(n_off);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n_off; ++i) col[i] = contrib[static_cast<std::size_t>(i) * n + j];
        g[j] = pairwise_sum(col) * scale;
    }
    return g;
}

} // namespace pulseforge::serial
