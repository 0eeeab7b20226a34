#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pulseforge/config.hpp"
#include "pulseforge/discrete_grape.hpp"
#include "pulseforge/oracles.hpp"
#include "pulseforge/spin_dynamics.hpp"

namespace pulseforge {

enum class InitMode { random, uniform_forward, from_lloyd };
InitMode parse_init_mode(const std::string& name);
const char* to_string(InitMode mode);

/// 101 bins: [0] counts phi < 0.9, bins 1..100 cover [0.9, 1.0] with width
/// 0.001 (the top bin includes 1.0). Counts sum to the number of inputs.
std::vector<int> phi_histogram(const std::vector<double>& phis);

/// Q3 - Q1 with linearly interpolated quartiles.
double interquartile_range(std::vector<double> values);

struct ContinuousArtifacts {
    PhasePulse pulse;
    double phi = 0.0;
    int iterations = 0;
    std::string reason;
    std::vector<double> trace;
    std::filesystem::path pulse_file;
};

/// Continuous benchmark run from the parabolic initial guess; writes the
/// trace, the final pulse and a summary under out_dir.
ContinuousArtifacts cmd_continuous(const ExperimentConfig& cfg,
                                   const std::filesystem::path& out_dir);

struct RealizationRow {
    int realization = 0;
    std::uint64_t seed = 0;
    double phi = 0.0;
    int iterations = 0;
    double wall_s = 0.0; // kept in memory and the summary; not in the CSV
};

struct CampaignResult {
    int m = 0;
    InitMode init = InitMode::random;
    std::vector<RealizationRow> rows;
    int best_index = 0;
    double phi_best = 0.0;
    double phi_mean = 0.0;
    std::vector<int> histogram;
    DiscretePulse best_pulse;
    std::vector<double> best_trace;
    double wall_s = 0.0;
};

/// Multi-start discrete optimization. Realization r of the size-m campaign
/// is seeded with derive_seed(derive_seed(master, m), r), so reruns and
/// different worker counts reproduce each realization exactly.
/// `lloyd_source` supplies the continuous pulse for InitMode::from_lloyd.
CampaignResult run_discrete_campaign(const ExperimentConfig& cfg, const EnsembleSpec& spec,
                                     int m, InitMode init,
                                     const PhasePulse* lloyd_source = nullptr);

/// Campaign plus result files (per-realization CSV, histogram, best pulse in
/// both formats, trace of the best realization, summary).
CampaignResult cmd_discrete(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                            InitMode init, const PhasePulse* lloyd_source = nullptr);

struct LloydArtifacts {
    DiscretePulse pulse;
    double phi = 0.0;
    double phi_continuous = 0.0;
    double distortion = 0.0;
    int iterations = 0;
};

/// Quantize a continuous pulse to m values with the circular Lloyd quantizer
/// and evaluate the result; writes codebook+mapping, the realized phases,
/// the distortion trace and a summary.
LloydArtifacts cmd_lloyd(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         const PhasePulse& continuous_pulse);

struct CompareRow {
    int m = 0;
    double phi_discrete_grape = 0.0;
    double phi_lloyd = 0.0;
    double phi_continuous = 0.0;
};

/// Best-of-campaign discrete GRAPE vs Lloyd quantization of the continuous
/// reference, for every m in m_list; writes compare.csv.
std::vector<CompareRow> cmd_compare(const ExperimentConfig& cfg,
                                    const std::filesystem::path& out_dir,
                                    const std::vector<int>& m_list,
                                    const PhasePulse& continuous_pulse);

/// Battery of oracle cross-checks (finite differences vs the analytic
/// gradient, exhaustive mapping search vs greedy sweeps, exhaustive
/// quantization vs Lloyd) on small seeded instances.
std::vector<oracles::OracleReport> run_oracle_checks(std::uint64_t seed);

} // namespace pulseforge
