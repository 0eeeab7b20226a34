// Benchmark comparing the OpenMP kernels against the serial reference on the
// broadband-inversion problem size.
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <omp.h>

#include "pulseforge/config.hpp"
#include "pulseforge/grape.hpp"
#include "pulseforge/serial_reference.hpp"
#include "pulseforge/spin_dynamics.hpp"

using namespace pulseforge;

namespace {

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = omp_get_wtime();
        fn();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    int reps = 5;
    bool small = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) reps = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--small") == 0) small = true;
    }

    ExperimentConfig cfg;
    if (small) {
        cfg.n_off = 20;
        cfg.tf_s = 36 * cfg.dt_s;
    }
    const EnsembleSpec spec = make_spec(cfg);
    const PhasePulse pulse = parabolic_initial_pulse(spec);

    std::printf("ensemble: N=%d slices, n_off=%d offsets, %d OpenMP threads, best of %d reps\n",
                spec.n_steps, spec.n_offsets(), omp_get_max_threads(), reps);

    double sink = 0.0;

    const double t_prop_ser = time_best_of(reps, [&] { sink += serial::evaluate_phi(spec, pulse); });
    const double t_prop_omp = time_best_of(reps, [&] { sink += evaluate_phi(spec, pulse); });
    const double t_grad_ser = time_best_of(reps, [&] { sink += serial::phase_gradient(spec, pulse)[0]; });
    const double t_grad_omp = time_best_of(reps, [&] { sink += phase_gradient(spec, pulse)[0]; });
    if (sink == 0.1234) std::printf("\n"); // keep the timed results observable

    // the two paths must agree exactly, not just fast
    const double phi_ser = serial::evaluate_phi(spec, pulse);
    const double phi_omp = evaluate_phi(spec, pulse);

    std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");
    std::printf("%-22s %12.3f %12.3f %8.2fx\n", "propagate+fidelity", 1e3 * t_prop_ser,
                1e3 * t_prop_omp, t_prop_ser / t_prop_omp);
    std::printf("%-22s %12.3f %12.3f %8.2fx\n", "phase gradient", 1e3 * t_grad_ser,
                1e3 * t_grad_omp, t_grad_ser / t_grad_omp);
    std::printf("bitwise match: %s (phi=%.17g)\n", phi_ser == phi_omp ? "yes" : "NO",
                phi_omp);
    return phi_ser == phi_omp ? 0 : 1;
}
