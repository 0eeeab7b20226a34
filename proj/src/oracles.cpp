#include "pulseforge/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulseforge/angles.hpp"
#include "pulseforge/summation.hpp"

namespace pulseforge::oracles {

namespace {

// Local copy on purpose: the oracle must not lean on the quantizer module it
// is used to verify.
double circ_dist(double a, double b) {
    const double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

} // namespace

std::vector<double> fd_gradient(const EnsembleSpec& spec, const PhasePulse& pulse, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: h <= 0");
    if (pulse.n_steps() != spec.n_steps)
        throw std::invalid_argument("fd_gradient: pulse length mismatch");
    const int n = spec.n_steps;
    std::vector<double> g(n);
    PhasePulse probe = pulse;
    for (int j = 0; j < n; ++j) {
        const double theta = pulse.theta[j];
        probe.theta[j] = theta + h;
        const double up = evaluate_phi(spec, probe);
        probe.theta[j] = theta - h;
        const double down = evaluate_phi(spec, probe);
        probe.theta[j] = theta;
        g[j] = (up - down) / (2.0 * h);
    }
    return g;
}

MappingSearchResult brute_force_mapping(const EnsembleSpec& spec,
                                        const std::vector<double>& values) {
    const int m = static_cast<int>(values.size());
    const int n = spec.n_steps;
    if (m < 1) throw std::invalid_argument("brute_force_mapping: empty codebook");
    double total = 1.0;
    for (int j = 0; j < n; ++j) {
        total *= m;
        if (total > 1e6) throw std::invalid_argument("brute_force_mapping: instance too large");
    }

    // Odometer enumeration, slice 0 fastest; the first optimum found wins,
    // so results are deterministic.
    MappingSearchResult best;
    best.mapping.assign(n, 0);
    std::vector<int> mapping(n, 0);
    PhasePulse pulse;
    pulse.theta.resize(n);
    bool first = true;
    while (true) {
        for (int j = 0; j < n; ++j) pulse.theta[j] = wrap_two_pi(values[mapping[j]]);
        const double phi = evaluate_phi(spec, pulse);
        if (first || phi > best.phi) {
            best.phi = phi;
            best.mapping = mapping;
            first = false;
        }
        int j = 0;
        while (j < n && ++mapping[j] == m) mapping[j++] = 0;
        if (j == n) break;
    }
    return best;
}

QuantizerSearchResult exhaustive_quantizer(std::span<const double> phases, int M) {
    const int n = static_cast<int>(phases.size());
    if (n < 1) throw std::invalid_argument("exhaustive_quantizer: no phases");
    if (n > 12 || M > 4) throw std::invalid_argument("exhaustive_quantizer: instance too large");
    if (M < 1) throw std::invalid_argument("exhaustive_quantizer: M < 1");
    if (M > n) throw std::invalid_argument("exhaustive_quantizer: M > N");

    std::vector<double> u(phases.begin(), phases.end());
    for (double& x : u) x = wrap_two_pi(x);
    std::sort(u.begin(), u.end());

    // A partition into M contiguous arcs of the circular order is a choice
    // of M cut gaps; gap g separates u[g] (last of one arc) from
    // u[(g+1) % n] (first of the next).
    std::vector<int> cuts(M);
    for (int j = 0; j < M; ++j) cuts[j] = j;

    QuantizerSearchResult best;
    bool first = true;
    std::vector<double> centroids(M);
    std::vector<double> dists(n);
    while (true) {
        for (int a = 0; a < M; ++a) {
            const int begin = (cuts[a] + 1) % n;
            const int len = (a + 1 < M ? cuts[a + 1] : cuts[0] + n) - cuts[a];
            double sum = 0.0;
            const double base = u[begin];
            for (int t = 0; t < len; ++t) {
                double v = u[(begin + t) % n];
                if (v < base) v += two_pi;
                sum += v;
            }
            centroids[a] = wrap_two_pi(sum / len);
        }
        std::sort(centroids.begin(), centroids.end());
        for (int i = 0; i < n; ++i) {
            double d = circ_dist(u[i], centroids[0]);
            for (int a = 1; a < M; ++a) d = std::min(d, circ_dist(u[i], centroids[a]));
            dists[i] = d;
        }
        const double j_total = pairwise_sum(dists);
        if (first || j_total < best.distortion) {
            best.distortion = j_total;
            best.centroids = centroids;
            first = false;
        }

        // next combination of M cut positions out of n gaps
        int a = M - 1;
        while (a >= 0 && cuts[a] == n - M + a) --a;
        if (a < 0) break;
        ++cuts[a];
        for (int b = a + 1; b < M; ++b) cuts[b] = cuts[b - 1] + 1;
    }
    return best;
}

} // namespace pulseforge::oracles
