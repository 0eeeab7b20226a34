#include "pulseforge/discrete_grape.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseforge/angles.hpp"
#include "pulseforge/rng.hpp"
#include "pulseforge/rotation_table.hpp"
#include "pulseforge/summation.hpp"

namespace pulseforge {

PhasePulse materialize(const DiscretePulse& dp) {
    PhasePulse p;
    p.theta.resize(dp.mapping.size());
    const int m = dp.n_values();
    for (std::size_t j = 0; j < dp.mapping.size(); ++j) {
        const int k = dp.mapping[j];
        if (k < 0 || k >= m) throw std::invalid_argument("DiscretePulse: mapping index out of range");
        p.theta[j] = wrap_two_pi(dp.values[k]);
    }
    return p;
}

std::vector<double> value_gradient(const EnsembleSpec& spec, const DiscretePulse& dp) {
    const auto g_theta = phase_gradient(spec, materialize(dp));
    std::vector<double> g(dp.n_values(), 0.0);
    for (std::size_t j = 0; j < dp.mapping.size(); ++j) g[dp.mapping[j]] += g_theta[j];
    return g;
}

ValueUpdateResult update_values(const EnsembleSpec& spec, const DiscretePulse& dp,
                                const GrapeOptions& opt) {
    const double phi0 = evaluate_phi(spec, materialize(dp));
    const auto g = value_gradient(spec, dp);
    auto eval = [&](const std::vector<double>& vals) {
        return evaluate_phi(spec, materialize(DiscretePulse{vals, dp.mapping}));
    };
    const auto br = detail::backtrack_ascent(dp.values, g, phi0, eval, opt);
    return {DiscretePulse{br.x, dp.mapping}, br.phi, br.stalled};
}

namespace {

// Score of one candidate slice phase for one offset: lambda . (R(theta) m).
// For the Rodrigues branch this is a quadratic polynomial in
// (cos theta, sin theta); the six coefficients are computed once per
// (slice, offset) so each additional codebook candidate costs a handful of
// flops instead of a full rotation.
struct ScorePoly {
    double t0, t1, t2, t3, t4, t5;

    double eval(double c, double s, double c2, double cs, double s2) const {
        return t0 + t1 * c + t2 * s + t3 * c2 + t4 * cs + t5 * s2;
    }
};

ScorePoly make_score_poly(const OffsetRotation& r, Vec3 m, Vec3 lambda) {
    const Vec3 q = cross(m, lambda);
    const double a1 = r.s * m.x, a2 = r.s * m.y, a3 = r.nz * m.z;
    const double b1 = r.s * lambda.x, b2 = r.s * lambda.y, b3 = r.nz * lambda.z;
    ScorePoly p;
    p.t0 = r.cos_a * dot(lambda, m) + r.sin_a * r.nz * q.z + r.omc * a3 * b3;
    p.t1 = r.sin_a * r.s * q.x + r.omc * (a1 * b3 + a3 * b1);
    p.t2 = r.sin_a * r.s * q.y + r.omc * (a2 * b3 + a3 * b2);
    p.t3 = r.omc * a1 * b1;
    p.t4 = r.omc * (a1 * b2 + a2 * b1);
    p.t5 = r.omc * a2 * b2;
    return p;
}

} // namespace

SweepResult mapping_sweep(const EnsembleSpec& spec, const DiscretePulse& dp) {
    if (dp.n_steps() != spec.n_steps)
        throw std::invalid_argument("mapping length does not match spec.n_steps");
    const int n = spec.n_steps;
    const int n_off = spec.n_offsets();
    const int m = dp.n_values();

    const PhasePulse pre = materialize(dp);
    const double phi_before = evaluate_phi(spec, pre);

    SweepResult res{dp, phi_before, false};
    if (m <= 1 || n == 0) return res;

    // Adjoint states from the pre-sweep pulse stay exact for the whole pass:
    // the score at slice j only needs the tail j+1..N, which an
    // increasing-order sweep has not modified yet.
    const auto lambda = adjoint_propagate(spec, pre);
    const auto table = make_rotation_table(spec);

    std::vector<double> vc(m), vs(m), vc2(m), vcs(m), vs2(m);
    for (int k = 0; k < m; ++k) {
        const double w = wrap_two_pi(dp.values[k]);
        vc[k] = std::cos(w);
        vs[k] = std::sin(w);
        vc2[k] = vc[k] * vc[k];
        vcs[k] = vc[k] * vs[k];
        vs2[k] = vs[k] * vs[k];
    }

    std::vector<int>& mapping = res.pulse.mapping;
    std::vector<Vec3> cur(n_off, spec.initial);
    std::vector<double> buf(static_cast<std::size_t>(m) * n_off);
    std::vector<double> score(m);

    for (int j = 0; j < n; ++j) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n_off; ++i) {
            const Vec3 lam = lambda[static_cast<std::size_t>(i) * (n + 1) + j + 1];
            if (table[i].taylor) {
                for (int k = 0; k < m; ++k)
                    buf[static_cast<std::size_t>(k) * n_off + i] = dot(
                        lam, apply_slice(table[i], spec.omega0, spec.dt, vc[k], vs[k], cur[i], 1.0));
            } else {
                const ScorePoly p = make_score_poly(table[i], cur[i], lam);
                for (int k = 0; k < m; ++k)
                    buf[static_cast<std::size_t>(k) * n_off + i] =
                        p.eval(vc[k], vs[k], vc2[k], vcs[k], vs2[k]);
            }
        }
        for (int k = 0; k < m; ++k)
            score[k] = pairwise_sum(std::span<const double>(buf.data() + static_cast<std::size_t>(k) * n_off,
                                                            n_off));

        // Keep the incumbent on ties; otherwise the lowest index among the
        // strictly better candidates wins. Deterministic.
        int best = mapping[j];
        double best_score = score[best];
        for (int k = 0; k < m; ++k) {
            if (score[k] > best_score) {
                best_score = score[k];
                best = k;
            }
        }
        if (best != mapping[j]) {
            mapping[j] = best;
            res.changed = true;
        }
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n_off; ++i)
            cur[i] = apply_slice(table[i], spec.omega0, spec.dt, vc[best], vs[best], cur[i], 1.0);
    }

    if (!res.changed) return res;

    // Re-evaluate through the canonical path; if rounding in the incremental
    // scores ever produced a net loss, keep the old mapping so the reported
    // fidelity never decreases.
    const double phi_after = evaluate_phi(spec, materialize(res.pulse));
    if (phi_after >= phi_before) {
        res.phi = phi_after;
    } else {
        res.pulse = dp;
        res.phi = phi_before;
        res.changed = false;
    }
    return res;
}

DiscreteResult optimize_discrete(const EnsembleSpec& spec, const DiscretePulse& initial,
                                 const DiscreteGrapeOptions& opt) {
    opt.grape.validate();
    spec.validate();
    if (initial.n_values() < 1) throw std::invalid_argument("optimize_discrete: empty codebook");

    DiscreteResult res;
    res.pulse = initial;
    for (double& v : res.pulse.values) v = wrap_two_pi(v);
    res.phi = evaluate_phi(spec, materialize(res.pulse));
    res.trace.phi.push_back(res.phi);
    res.trace.reason = Termination::max_iters;

    int small = 0;
    for (int iter = 1; iter <= opt.grape.max_iters; ++iter) {
        const double phi_start = res.phi;

        const auto vu = update_values(spec, res.pulse, opt.grape);
        if (!vu.stalled) {
            res.pulse = vu.pulse;
            res.phi = vu.phi;
        }

        bool sweep_changed = false;
        if (opt.sweep_enabled) {
            const auto sw = mapping_sweep(spec, res.pulse);
            res.pulse = sw.pulse;
            res.phi = sw.phi;
            sweep_changed = sw.changed;
        }

        res.trace.phi.push_back(res.phi);
        res.trace.iterations = iter;

        if (vu.stalled && !sweep_changed) {
            res.trace.reason = Termination::stalled;
            break;
        }
        if (res.phi - phi_start < opt.grape.tol_delta_phi) {
            if (++small >= opt.grape.patience) {
                res.trace.reason = Termination::converged;
                break;
            }
        } else {
            small = 0;
        }
    }
    return res;
}

DiscretePulse init_random(int n_steps, int M, std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("init_random: M < 1");
    if (n_steps < 0) throw std::invalid_argument("init_random: n_steps < 0");
    SplitMix64 rng(seed);
    DiscretePulse dp;
    dp.values.resize(M);
    for (int k = 0; k < M; ++k) dp.values[k] = rng.next_angle();
    dp.mapping.resize(n_steps);
    for (int j = 0; j < n_steps; ++j) dp.mapping[j] = static_cast<int>(rng.next_below(M));
    return dp;
}

DiscretePulse init_uniform_forward(const EnsembleSpec& spec, int M) {
    if (M < 1) throw std::invalid_argument("init_uniform_forward: M < 1");
    DiscretePulse dp;
    dp.values.resize(M);
    for (int k = 0; k < M; ++k) dp.values[k] = wrap_two_pi(two_pi * k / M);
    dp.mapping.assign(spec.n_steps, 0);
    return mapping_sweep(spec, dp).pulse;
}

} // namespace pulseforge
