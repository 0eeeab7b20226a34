#include "pulseforge/grape.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseforge/angles.hpp"
#include "pulseforge/rotation_table.hpp"
#include "pulseforge/summation.hpp"

namespace pulseforge {

void GrapeOptions::validate() const {
    if (max_iters < 1) throw std::invalid_argument("GrapeOptions: max_iters < 1");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw std::invalid_argument("GrapeOptions: backtrack_factor outside (0,1)");
    if (!(min_step > 0.0)) throw std::invalid_argument("GrapeOptions: min_step <= 0");
    if (!(epsilon0 > 0.0)) throw std::invalid_argument("GrapeOptions: epsilon0 <= 0");
    if (patience < 1) throw std::invalid_argument("GrapeOptions: patience < 1");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::stalled: return "stalled";
        case Termination::max_iters: return "max_iters";
    }
    return "unknown";
}

std::vector<double> phase_gradient(const EnsembleSpec& spec, const PhasePulse& pulse) {
    if (pulse.n_steps() != spec.n_steps)
        throw std::invalid_argument("pulse length does not match spec.n_steps");
    const int n = spec.n_steps;
    const int n_off = spec.n_offsets();
    if (n == 0) return {};

    const PropagationRecord rec = propagate_record(spec, pulse);

    std::vector<double> c(n), s(n);
    for (int j = 0; j < n; ++j) {
        c[j] = std::cos(pulse.theta[j]);
        s[j] = std::sin(pulse.theta[j]);
    }

    std::vector<double> contrib(static_cast<std::size_t>(n_off) * n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_off; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec3 dw{-spec.omega0 * s[j], spec.omega0 * c[j], 0.0};
            contrib[static_cast<std::size_t>(i) * n + j] = dot(rec.adj(i, j), cross(dw, rec.fwd(i, j)));
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

namespace detail {

BacktrackResult backtrack_ascent(const std::vector<double>& x0, const std::vector<double>& g,
                                 double phi0,
                                 const std::function<double(const std::vector<double>&)>& eval,
                                 const GrapeOptions& opt) {
    opt.validate();
    BacktrackResult r;
    r.x = x0;
    r.phi = phi0;
    r.stalled = true;

    double gmax = 0.0;
    for (double gi : g) gmax = std::max(gmax, std::abs(gi));
    if (gmax == 0.0) return r;

    std::vector<double> cand(x0.size());
    for (double eps = opt.epsilon0 / gmax; eps >= opt.min_step; eps *= opt.backtrack_factor) {
        for (std::size_t i = 0; i < x0.size(); ++i) cand[i] = wrap_two_pi(x0[i] + eps * g[i]);
        const double phi = eval(cand);
        if (phi > phi0) {
            r.epsilon = eps;
            r.x = cand;
            r.phi = phi;
            r.stalled = false;
            return r;
        }
    }
    return r;
}

} // namespace detail

LineSearchResult line_search(const EnsembleSpec& spec, const PhasePulse& pulse,
                             const std::vector<double>& gradient, const GrapeOptions& opt) {
    if (static_cast<int>(gradient.size()) != spec.n_steps)
        throw std::invalid_argument("gradient length does not match spec.n_steps");
    const double phi0 = evaluate_phi(spec, pulse);
    auto eval = [&](const std::vector<double>& x) {
        return evaluate_phi(spec, PhasePulse{x});
    };
    const auto br = detail::backtrack_ascent(pulse.theta, gradient, phi0, eval, opt);
    return {br.epsilon, PhasePulse{br.x}, br.phi, br.stalled};
}

ContinuousResult optimize_continuous(const EnsembleSpec& spec, const PhasePulse& initial,
                                     const GrapeOptions& opt) {
    opt.validate();
    spec.validate();
    ContinuousResult res;
    res.pulse = wrapped(initial);
    res.phi = evaluate_phi(spec, res.pulse);
    res.trace.phi.push_back(res.phi);
    res.trace.reason = Termination::max_iters;

    int small = 0;
    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        const auto g = phase_gradient(spec, res.pulse);
        const auto ls = line_search(spec, res.pulse, g, opt);
        if (ls.stalled) {
            res.trace.reason = Termination::stalled;
            break;
        }
        const double dphi = ls.phi - res.phi;
        res.pulse = ls.pulse;
        res.phi = ls.phi;
        res.trace.phi.push_back(res.phi);
        res.trace.iterations = iter;
        if (dphi < opt.tol_delta_phi) {
            if (++small >= opt.patience) {
                res.trace.reason = Termination::converged;
                break;
            }
        } else {
            small = 0;
        }
    }
    return res;
}

PhasePulse parabolic_initial_pulse(const EnsembleSpec& spec) {
    PhasePulse p;
    p.theta.resize(spec.n_steps);
    for (int j = 0; j < spec.n_steps; ++j) {
        const double t = (j + 0.5) * spec.dt;
        const double u = 2.0 * t / spec.tf - 1.0;
        p.theta[j] = wrap_two_pi(0.5 * std::numbers::pi * u * u);
    }
    return p;
}

} // namespace pulseforge
