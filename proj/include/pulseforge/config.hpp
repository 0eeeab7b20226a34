#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pulseforge/discrete_grape.hpp"
#include "pulseforge/spin_dynamics.hpp"

namespace pulseforge {

/// Benchmark and algorithm parameters. Defaults are the broadband-inversion
/// benchmark: offsets spanning +-10 kHz, a 10 kHz control amplitude, a
/// 0.18 ms pulse digitized at 0.5 us (360 slices), 200 isochromats.
struct ExperimentConfig {
    double omega_max_hz = 10e3;
    double omega0_hz = 10e3;
    double tf_s = 0.18e-3;
    double dt_s = 0.5e-6;
    int n_off = 200;
    int m = 4;
    int n_realizations = 100;
    std::uint64_t seed = 1;
    std::optional<int> max_iters; // unset: 5000 continuous, 2000 discrete
    double tol_delta_phi = 1e-8;
    double lloyd_epsilon = 1e-10;

    void validate() const;
};

/// Parse `key=value` lines ('#' comment lines and blank lines ignored).
/// Unknown keys, malformed lines and non-numeric values raise
/// std::runtime_error naming the offending line. Missing keys keep their
/// defaults.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig parse_config(const std::filesystem::path& path);

EnsembleSpec make_spec(const ExperimentConfig& cfg);
GrapeOptions continuous_options(const ExperimentConfig& cfg);
DiscreteGrapeOptions discrete_options(const ExperimentConfig& cfg);

} // namespace pulseforge
