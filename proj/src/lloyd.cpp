#include "pulseforge/lloyd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulseforge/angles.hpp"
#include "pulseforge/summation.hpp"

namespace pulseforge {

double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

std::vector<double> uniform_boundaries(int M) {
    if (M < 1) throw std::invalid_argument("uniform_boundaries: M < 1");
    std::vector<double> b(M);
    for (int j = 0; j < M; ++j) b[j] = wrap_two_pi(two_pi * (j + 0.5) / M);
    std::sort(b.begin(), b.end());
    return b;
}

namespace {

// Arc j is [B[j], B[j+1]) with the last arc wrapping past 2*pi.
int arc_index(double u, std::span<const double> b) {
    const auto it = std::upper_bound(b.begin(), b.end(), u);
    const int j = static_cast<int>(it - b.begin()) - 1;
    return j < 0 ? static_cast<int>(b.size()) - 1 : j;
}

double arc_midpoint(std::span<const double> b, int j) {
    const int m = static_cast<int>(b.size());
    const double len = (j + 1 < m) ? b[j + 1] - b[j] : b[0] + two_pi - b[j];
    return wrap_two_pi(b[j] + 0.5 * len);
}

} // namespace

std::vector<double> bin_means(std::span<const double> phases,
                              std::span<const double> boundaries,
                              std::span<const double> fallback) {
    const int m = static_cast<int>(boundaries.size());
    if (m < 1) throw std::invalid_argument("bin_means: empty boundaries");
    if (fallback.size() != boundaries.size())
        throw std::invalid_argument("bin_means: fallback size mismatch");
    if (phases.empty()) throw std::invalid_argument("bin_means: no phases");

    std::vector<double> sum(m, 0.0);
    std::vector<int> count(m, 0);
    for (double u : phases) {
        const double w = wrap_two_pi(u);
        const int j = arc_index(w, boundaries);
        sum[j] += (w < boundaries[j]) ? w + two_pi : w;
        ++count[j];
    }

    std::vector<double> y(m);
    for (int j = 0; j < m; ++j)
        y[j] = count[j] > 0 ? wrap_two_pi(sum[j] / count[j]) : wrap_two_pi(fallback[j]);
    std::sort(y.begin(), y.end());
    return y;
}

std::vector<double> bin_means(std::span<const double> phases,
                              std::span<const double> boundaries) {
    std::vector<double> mid(boundaries.size());
    for (std::size_t j = 0; j < boundaries.size(); ++j)
        mid[j] = arc_midpoint(boundaries, static_cast<int>(j));
    return bin_means(phases, boundaries, mid);
}

double distortion(std::span<const double> phases, std::span<const double> centroids) {
    if (centroids.empty()) throw std::invalid_argument("distortion: empty codebook");
    std::vector<double> d(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i)
        d[i] = circular_distance(phases[i], centroids[nearest_centroid(phases[i], centroids)]);
    return pairwise_sum(d);
}

std::vector<double> update_boundaries(std::span<const double> centroids) {
    const int m = static_cast<int>(centroids.size());
    if (m < 1) throw std::invalid_argument("update_boundaries: empty codebook");
    std::vector<double> b(m);
    for (int j = 0; j + 1 < m; ++j) b[j] = wrap_two_pi(0.5 * (centroids[j] + centroids[j + 1]));
    b[m - 1] = wrap_two_pi(0.5 * (centroids[m - 1] + centroids[0] + two_pi));
    std::sort(b.begin(), b.end());
    return b;
}

int nearest_centroid(double phase, std::span<const double> centroids) {
    int best = 0;
    double best_d = circular_distance(phase, centroids[0]);
    for (std::size_t k = 1; k < centroids.size(); ++k) {
        const double d = circular_distance(phase, centroids[k]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

LloydResult run_lloyd(std::span<const double> phases, int M, double epsilon, int max_iters,
                      std::vector<double> boundaries) {
    if (M < 1) throw std::invalid_argument("run_lloyd: M < 1");
    if (phases.empty()) throw std::invalid_argument("run_lloyd: no phases");
    if (!(epsilon > 0.0)) throw std::invalid_argument("run_lloyd: epsilon <= 0");
    if (max_iters < 1) throw std::invalid_argument("run_lloyd: max_iters < 1");
    if (static_cast<int>(boundaries.size()) != M)
        throw std::invalid_argument("run_lloyd: boundaries size != M");

    std::vector<double> u(phases.begin(), phases.end());
    for (double& x : u) x = wrap_two_pi(x);

    for (double& b : boundaries) b = wrap_two_pi(b);
    std::sort(boundaries.begin(), boundaries.end());

    std::vector<double> fallback(M);
    for (int j = 0; j < M; ++j) fallback[j] = arc_midpoint(boundaries, j);

    LloydResult res;
    std::vector<double> y;
    double j_prev = 0.0;
    int k = 0;
    while (k < max_iters) {
        ++k;
        y = bin_means(u, boundaries, fallback);
        const double jk = distortion(u, y);
        res.distortion_trace.push_back(jk);
        if (std::abs(jk - j_prev) <= epsilon) break;
        j_prev = jk;
        boundaries = update_boundaries(y);
        // An arc with no phases keeps the centroid it was built around.
        for (int j = 0; j < M; ++j) fallback[j] = arc_midpoint(boundaries, j);
        for (double c : y) fallback[arc_index(c, boundaries)] = c;
    }

    res.codebook.centroids = y;
    res.codebook.boundaries = update_boundaries(y);
    res.codebook.iterations = k;
    res.codebook.distortion = res.distortion_trace.back();

    res.quantized.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        res.quantized[i] = y[nearest_centroid(u[i], y)];
    return res;
}

LloydResult run_lloyd(std::span<const double> phases, int M, double epsilon, int max_iters) {
    return run_lloyd(phases, M, epsilon, max_iters, uniform_boundaries(M));
}

DiscretePulse to_discrete_pulse(std::span<const double> quantized,
                                std::span<const double> centroids) {
    DiscretePulse dp;
    dp.values.assign(centroids.begin(), centroids.end());
    dp.mapping.resize(quantized.size());
    for (std::size_t j = 0; j < quantized.size(); ++j) {
        const auto it = std::find(centroids.begin(), centroids.end(), quantized[j]);
        if (it == centroids.end())
            throw std::invalid_argument("to_discrete_pulse: value not in codebook");
        dp.mapping[j] = static_cast<int>(it - centroids.begin());
    }
    return dp;
}

} // namespace pulseforge
