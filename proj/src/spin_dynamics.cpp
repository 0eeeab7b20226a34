#include "pulseforge/spin_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulseforge/angles.hpp"
#include "pulseforge/rotation_table.hpp"
#include "pulseforge/summation.hpp"

namespace pulseforge {

PhasePulse wrapped(PhasePulse p) {
    for (double& t : p.theta) t = wrap_two_pi(t);
    return p;
}

void EnsembleSpec::validate() const {
    if (offsets.empty()) throw std::invalid_argument("EnsembleSpec: no offsets");
    if (!std::is_sorted(offsets.begin(), offsets.end()))
        throw std::invalid_argument("EnsembleSpec: offsets must be ascending");
    if (omega0 < 0.0) throw std::invalid_argument("EnsembleSpec: omega0 < 0");
    if (n_steps < 0) throw std::invalid_argument("EnsembleSpec: n_steps < 0");
    if (n_steps > 0) {
        if (dt <= 0.0) throw std::invalid_argument("EnsembleSpec: dt <= 0");
        if (std::abs(dt * n_steps - tf) > 1e-12 * std::abs(tf))
            throw std::invalid_argument("EnsembleSpec: dt * n_steps != tf");
    }
}

std::vector<double> EnsembleSpec::symmetric_offsets(int n_off, double omega_max) {
    if (n_off < 1) throw std::invalid_argument("symmetric_offsets: n_off < 1");
    if (n_off == 1) return {0.0};
    std::vector<double> w(n_off);
    const double step = 2.0 * omega_max / (n_off - 1);
    for (int i = 0; i < n_off; ++i) w[i] = -omega_max + step * i;
    return w;
}

EnsembleSpec EnsembleSpec::inversion(double omega_max, double omega0, double tf,
                                     double dt, int n_off) {
    EnsembleSpec s;
    s.offsets = symmetric_offsets(n_off, omega_max);
    s.omega0 = omega0;
    s.tf = tf;
    s.dt = dt;
    s.n_steps = static_cast<int>(std::llround(tf / dt));
    s.initial = {0.0, 0.0, 1.0};
    s.target = {0.0, 0.0, -1.0};
    s.validate();
    return s;
}

std::vector<OffsetRotation> make_rotation_table(const EnsembleSpec& spec) {
    std::vector<OffsetRotation> table;
    table.reserve(spec.offsets.size());
    for (double w : spec.offsets)
        table.push_back(make_offset_rotation(w, spec.omega0, spec.dt));
    return table;
}

Vec3 effective_field(double theta, double offset, double omega0) {
    return {omega0 * std::cos(theta), omega0 * std::sin(theta), offset};
}

Vec3 step_propagate(const Vec3& m, const Vec3& omega_eff, double dt) {
    const double mag = norm(omega_eff);
    const double alpha = mag * dt;
    if (alpha < small_angle_threshold) {
        const Vec3 c1 = cross(omega_eff, m);
        const Vec3 c2 = cross(omega_eff, c1);
        return m + dt * c1 + (0.5 * dt * dt) * c2;
    }
    const Vec3 n = (1.0 / mag) * omega_eff;
    const double sh = std::sin(0.5 * alpha);
    const double omc = 2.0 * sh * sh;
    const double ca = 1.0 - omc;
    const double sa = std::sin(alpha);
    const Vec3 c = cross(n, m);
    const double p = omc * dot(n, m);
    return {ca * m.x + sa * c.x + p * n.x,
            ca * m.y + sa * c.y + p * n.y,
            ca * m.z + sa * c.z + p * n.z};
}

namespace {

void check_pulse(const EnsembleSpec& spec, const PhasePulse& pulse) {
    if (pulse.n_steps() != spec.n_steps)
        throw std::invalid_argument("pulse length does not match spec.n_steps");
}

struct SliceTrig {
    std::vector<double> c, s;
};

SliceTrig slice_trig(const PhasePulse& pulse) {
    const int n = pulse.n_steps();
    SliceTrig t;
    t.c.resize(n);
    t.s.resize(n);
    for (int j = 0; j < n; ++j) {
        t.c[j] = std::cos(pulse.theta[j]);
        t.s[j] = std::sin(pulse.theta[j]);
    }
    return t;
}

} // namespace

std::vector<Vec3> propagate_ensemble(const EnsembleSpec& spec, const PhasePulse& pulse) {
    check_pulse(spec, pulse);
    const auto table = make_rotation_table(spec);
    const auto trig = slice_trig(pulse);
    const int n_off = spec.n_offsets();
    const int n = spec.n_steps;
    std::vector<Vec3> finals(n_off);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_off; ++i) {
        Vec3 m = spec.initial;
        for (int j = 0; j < n; ++j)
            m = apply_slice(table[i], spec.omega0, spec.dt, trig.c[j], trig.s[j], m, 1.0);
        finals[i] = m;
    }
    return finals;
}

std::vector<Vec3> adjoint_propagate(const EnsembleSpec& spec, const PhasePulse& pulse) {
    check_pulse(spec, pulse);
    const auto table = make_rotation_table(spec);
    const auto trig = slice_trig(pulse);
    const int n_off = spec.n_offsets();
    const int n = spec.n_steps;
    std::vector<Vec3> states(static_cast<std::size_t>(n_off) * (n + 1));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_off; ++i) {
        Vec3* row = states.data() + static_cast<std::size_t>(i) * (n + 1);
        row[n] = spec.target;
        for (int j = n; j > 0; --j)
            row[j - 1] = apply_slice(table[i], spec.omega0, spec.dt, trig.c[j - 1],
                                     trig.s[j - 1], row[j], -1.0);
    }
    return states;
}

PropagationRecord propagate_record(const EnsembleSpec& spec, const PhasePulse& pulse) {
    check_pulse(spec, pulse);
    const auto table = make_rotation_table(spec);
    const auto trig = slice_trig(pulse);
    const int n_off = spec.n_offsets();
    const int n = spec.n_steps;
    PropagationRecord rec;
    rec.n_offsets = n_off;
    rec.n_steps = n;
    rec.forward.resize(static_cast<std::size_t>(n_off) * (n + 1));
    rec.adjoint.resize(static_cast<std::size_t>(n_off) * (n + 1));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_off; ++i) {
        Vec3* f = rec.forward.data() + static_cast<std::size_t>(i) * (n + 1);
        Vec3* a = rec.adjoint.data() + static_cast<std::size_t>(i) * (n + 1);
        f[0] = spec.initial;
        for (int j = 0; j < n; ++j)
            f[j + 1] = apply_slice(table[i], spec.omega0, spec.dt, trig.c[j], trig.s[j], f[j], 1.0);
        a[n] = spec.target;
        for (int j = n; j > 0; --j)
            a[j - 1] = apply_slice(table[i], spec.omega0, spec.dt, trig.c[j - 1],
                                   trig.s[j - 1], a[j], -1.0);
    }
    return rec;
}

double ensemble_fidelity(std::span<const Vec3> finals, Vec3 target) {
    if (finals.empty()) throw std::invalid_argument("ensemble_fidelity: empty ensemble");
    std::vector<double> contrib(finals.size());
    for (std::size_t i = 0; i < finals.size(); ++i) contrib[i] = dot(finals[i], target);
    return pairwise_sum(contrib) / static_cast<double>(finals.size());
}

double evaluate_phi(const EnsembleSpec& spec, const PhasePulse& pulse) {
    const auto finals = propagate_ensemble(spec, pulse);
    return ensemble_fidelity(finals, spec.target);
}

} // namespace pulseforge
