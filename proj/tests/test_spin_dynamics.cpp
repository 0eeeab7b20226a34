#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pulseforge/angles.hpp"
#include "pulseforge/rng.hpp"
#include "pulseforge/spin_dynamics.hpp"
#include "test_oracle_helpers.hpp"

using namespace pulseforge;
using testutil::dist;

namespace {

PhasePulse random_pulse(int n, SplitMix64& rng) {
    PhasePulse p;
    p.theta.resize(n);
    for (double& t : p.theta) t = rng.next_angle();
    return p;
}

EnsembleSpec small_spec(int n_steps, int n_off, double omega0 = two_pi * 1e4) {
    const double dt = 0.5e-6;
    return EnsembleSpec::inversion(two_pi * 1e4, omega0, n_steps * dt, dt, n_off);
}

} // namespace

TEST_CASE("wrap_two_pi") {
    CHECK(wrap_two_pi(0.0) == 0.0);
    CHECK(wrap_two_pi(two_pi) == 0.0);
    CHECK(wrap_two_pi(-1e-18) == 0.0);
    CHECK(wrap_two_pi(7.0) == doctest::Approx(7.0 - two_pi).epsilon(1e-15));
    CHECK(wrap_two_pi(-0.5) == doctest::Approx(two_pi - 0.5).epsilon(1e-15));
    CHECK(wrap_two_pi(5 * two_pi + 0.25) == doctest::Approx(0.25).epsilon(1e-12));
    for (double x : {0.0, 0.1, 3.0, 6.28}) {
        const double w = wrap_two_pi(x);
        CHECK(w >= 0.0);
        CHECK(w < two_pi);
    }
}

TEST_CASE("effective_field matches its definition") {
    const Vec3 a = effective_field(0.0, 0.0, two_pi * 1e4);
    CHECK(a.x == two_pi * 1e4);
    CHECK(a.y == 0.0);
    CHECK(a.z == 0.0);

    const Vec3 b = effective_field(std::numbers::pi / 2, 0.0, 1.0);
    CHECK(std::abs(b.x) < 1e-12);
    CHECK(b.y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.z == 0.0);

    const Vec3 c = effective_field(std::numbers::pi / 4, 100.0, std::sqrt(2.0));
    CHECK(c.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.y == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.z == 100.0);
}

TEST_CASE("step_propagate: pi rotation about x flips z") {
    const Vec3 m = step_propagate({0, 0, 1}, {std::numbers::pi, 0, 0}, 1.0);
    CHECK(dist(m, {0, 0, -1}) < 1e-12);
}

TEST_CASE("step_propagate: zero field is the identity") {
    const Vec3 m = step_propagate({0.3, -0.4, 0.5}, {0, 0, 0}, 123.0);
    CHECK(m.x == 0.3);
    CHECK(m.y == -0.4);
    CHECK(m.z == 0.5);
}

TEST_CASE("step_propagate matches the dense matrix exponential") {
    // the benchmark-sized slice: alpha = 2*pi*1e4 * 0.5e-6
    const Vec3 w{two_pi * 1e4, 0.0, 0.0};
    const double dt = 0.5e-6;
    const Vec3 got = step_propagate({0, 0, 1}, w, dt);
    const Vec3 want = testutil::expm_step({0, 0, 1}, w, dt);
    CHECK(dist(got, want) < 1e-12);
    const double alpha = norm(w) * dt;
    CHECK(got.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(got.y == doctest::Approx(-std::sin(alpha)).epsilon(1e-12));
    CHECK(got.z == doctest::Approx(std::cos(alpha)).epsilon(1e-12));

    SplitMix64 rng(1234);
    for (int t = 0; t < 50; ++t) {
        const Vec3 axis{rng.next_double() - 0.5, rng.next_double() - 0.5, rng.next_double() - 0.5};
        const double mag = std::pow(10.0, -2.0 + 8.0 * rng.next_double());
        const Vec3 omega = mag * axis;
        Vec3 m{rng.next_double() - 0.5, rng.next_double() - 0.5, rng.next_double() - 0.5};
        const double inv = 1.0 / norm(m);
        m = inv * m;
        const Vec3 a = step_propagate(m, omega, 1e-3);
        const Vec3 b = testutil::expm_step(m, omega, 1e-3);
        CHECK(dist(a, b) < 1e-12);
    }
}

TEST_CASE("step_propagate small-angle branch agrees across the threshold") {
    const Vec3 m0{0.6, 0.0, 0.8};
    for (double alpha : {2e-9, 9.9e-9, 1.01e-8, 5e-8}) {
        const Vec3 w{0.0, alpha, 0.0}; // dt = 1
        const Vec3 got = step_propagate(m0, w, 1.0);
        const Vec3 want = testutil::expm_step(m0, w, 1.0);
        CHECK(dist(got, want) < 1e-12);
        CHECK(std::abs(norm(got) - 1.0) < 1e-12);
    }
}

TEST_CASE("propagate_ensemble: N=0 returns the initial state") {
    EnsembleSpec spec;
    spec.offsets = {-1.0, 0.0, 2.0};
    spec.omega0 = 1.0;
    spec.tf = 0.0;
    spec.n_steps = 0;
    spec.dt = 0.0;
    const auto finals = propagate_ensemble(spec, PhasePulse{});
    REQUIRE(finals.size() == 3);
    for (const Vec3& m : finals) CHECK(dist(m, spec.initial) == 0.0);
}

TEST_CASE("propagate_ensemble: resonant pi pulse inverts") {
    const int n = 4;
    const double dt = 0.5e-6;
    const double omega0 = std::numbers::pi / (n * dt);
    const EnsembleSpec spec = EnsembleSpec::inversion(1.0, omega0, n * dt, dt, 1);
    REQUIRE(spec.offsets[0] == 0.0);
    PhasePulse pulse;
    pulse.theta.assign(n, 0.0);
    const auto finals = propagate_ensemble(spec, pulse);
    CHECK(dist(finals[0], {0, 0, -1}) < 1e-12);
    CHECK(evaluate_phi(spec, pulse) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("propagate_ensemble rejects mismatched pulse length") {
    const EnsembleSpec spec = small_spec(8, 3);
    PhasePulse pulse;
    pulse.theta.assign(7, 0.0);
    CHECK_THROWS_AS(propagate_ensemble(spec, pulse), std::invalid_argument);
    CHECK_THROWS_AS(adjoint_propagate(spec, pulse), std::invalid_argument);
    CHECK_THROWS_AS(propagate_record(spec, pulse), std::invalid_argument);
}

TEST_CASE("piecewise-constant propagation matches a fine RK4 integrator") {
    SplitMix64 rng(77);
    const EnsembleSpec spec = small_spec(20, 5);
    const PhasePulse pulse = random_pulse(20, rng);
    const auto finals = propagate_ensemble(spec, pulse);
    for (int i = 0; i < spec.n_offsets(); ++i) {
        const Vec3 fine = testutil::rk4_propagate(spec, pulse, spec.offsets[i], 100);
        CHECK(dist(finals[i], fine) / norm(fine) < 1e-10);
    }
}

TEST_CASE("adjoint states are the target under identity dynamics") {
    EnsembleSpec spec;
    spec.offsets = {0.0};
    spec.omega0 = 0.0;
    spec.tf = 4 * 0.5e-6;
    spec.n_steps = 4;
    spec.dt = 0.5e-6;
    PhasePulse pulse;
    pulse.theta.assign(4, 1.234);
    const auto adj = adjoint_propagate(spec, pulse);
    REQUIRE(adj.size() == 5);
    for (const Vec3& a : adj) CHECK(dist(a, spec.target) == 0.0);
}

TEST_CASE("adjoint of a resonant pi pulse pulls the target back to +z") {
    const double dt = 1e-5;
    const double omega0 = std::numbers::pi / dt;
    const EnsembleSpec spec = EnsembleSpec::inversion(1.0, omega0, dt, dt, 1);
    PhasePulse pulse;
    pulse.theta = {0.0};
    const auto adj = adjoint_propagate(spec, pulse);
    REQUIRE(adj.size() == 2);
    CHECK(dist(adj[1], {0, 0, -1}) == 0.0); // target itself
    CHECK(dist(adj[0], {0, 0, 1}) < 1e-12);
}

TEST_CASE("adjoint duality: lambda_j . M_j is j-independent") {
    SplitMix64 rng(2024);
    for (int t = 0; t < 10; ++t) {
        const int n = 1 + static_cast<int>(rng.next_below(16));
        const int n_off = 1 + static_cast<int>(rng.next_below(4));
        const EnsembleSpec spec = small_spec(n, n_off);
        const PhasePulse pulse = random_pulse(n, rng);
        const auto rec = propagate_record(spec, pulse);
        for (int i = 0; i < n_off; ++i) {
            const double ref = dot(rec.adj(i, 0), rec.fwd(i, 0));
            for (int j = 0; j <= n; ++j)
                CHECK(std::abs(dot(rec.adj(i, j), rec.fwd(i, j)) - ref) < 1e-10);
        }
    }
}

TEST_CASE("norm conservation along the whole grid") {
    SplitMix64 rng(5);
    const EnsembleSpec spec = small_spec(360, 7);
    const PhasePulse pulse = random_pulse(360, rng);
    const auto rec = propagate_record(spec, pulse);
    for (int i = 0; i < spec.n_offsets(); ++i)
        for (int j = 0; j <= spec.n_steps; ++j) {
            CHECK(std::abs(norm(rec.fwd(i, j)) - 1.0) <= 1e-12);
            CHECK(std::abs(norm(rec.adj(i, j)) - 1.0) <= 1e-12);
        }
}

TEST_CASE("x-only pulses see symmetric +/- offset contributions") {
    SplitMix64 rng(9);
    const EnsembleSpec spec = small_spec(40, 10); // even count: no zero offset
    PhasePulse pulse;
    pulse.theta.resize(40);
    for (double& t : pulse.theta) t = rng.next_below(2) ? std::numbers::pi : 0.0;
    const auto finals = propagate_ensemble(spec, pulse);
    const int n_off = spec.n_offsets();
    for (int i = 0; i < n_off / 2; ++i) {
        const double lo = dot(finals[i], spec.target);
        const double hi = dot(finals[n_off - 1 - i], spec.target);
        CHECK(std::abs(lo - hi) <= 1e-12);
    }
}

TEST_CASE("ensemble_fidelity averages projections") {
    const Vec3 f{0, 0, -1};
    std::vector<Vec3> finals;
    finals.assign(4, f);
    CHECK(ensemble_fidelity(finals, f) == 1.0);
    finals.assign(4, {0, 0, 1});
    CHECK(ensemble_fidelity(finals, f) == -1.0);
    finals = {f, {0, 0, 1}};
    CHECK(ensemble_fidelity(finals, f) == 0.0);
    finals.clear();
    CHECK_THROWS_AS(ensemble_fidelity(finals, f), std::invalid_argument);
}

TEST_CASE("symmetric_offsets") {
    CHECK(EnsembleSpec::symmetric_offsets(1, 123.0) == std::vector<double>{0.0});
    const auto w = EnsembleSpec::symmetric_offsets(200, two_pi * 1e4);
    REQUIRE(w.size() == 200);
    CHECK(w.front() == -two_pi * 1e4);
    CHECK(w.back() == two_pi * 1e4);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) CHECK(w[i] < w[i + 1]);
    for (std::size_t i = 0; i < w.size() / 2; ++i)
        CHECK(std::abs(w[i] + w[w.size() - 1 - i]) < 1e-8);
}

TEST_CASE("EnsembleSpec validation") {
    const EnsembleSpec ok = EnsembleSpec::inversion(two_pi * 1e4, two_pi * 1e4, 0.18e-3, 0.5e-6, 200);
    CHECK(ok.n_steps == 360);
    ok.validate();

    EnsembleSpec bad = ok;
    bad.n_steps = 359;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = ok;
    std::swap(bad.offsets[0], bad.offsets[50]);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = ok;
    bad.offsets.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
