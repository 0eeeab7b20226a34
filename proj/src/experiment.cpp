#include "pulseforge/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pulseforge/lloyd.hpp"
#include "pulseforge/pulse_io.hpp"
#include "pulseforge/rng.hpp"
#include "pulseforge/summation.hpp"

namespace pulseforge {

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", s);
    return buf;
}

// Reported fidelities must survive the trip through their exported file.
void verify_phase_export(const EnsembleSpec& spec, const std::filesystem::path& path,
                         double phi_expected) {
    const auto lp = read_phase_pulse(path);
    const double phi = evaluate_phi(spec, lp.pulse);
    if (std::abs(phi - phi_expected) > 1e-12)
        throw std::runtime_error(path.string() + ": exported pulse re-evaluates to a different fidelity");
}

void verify_discrete_export(const EnsembleSpec& spec, const std::filesystem::path& path,
                            double phi_expected) {
    const auto dp = read_discrete_pulse(path);
    const double phi = evaluate_phi(spec, materialize(dp));
    if (std::abs(phi - phi_expected) > 1e-12)
        throw std::runtime_error(path.string() + ": exported pulse re-evaluates to a different fidelity");
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i)
        rows.push_back({std::to_string(i), format_g17(trace[i])});
    write_csv(path, {"iteration", "phi"}, rows);
}

} // namespace

InitMode parse_init_mode(const std::string& name) {
    if (name == "random") return InitMode::random;
    if (name == "uniform_forward") return InitMode::uniform_forward;
    if (name == "from_lloyd") return InitMode::from_lloyd;
    throw std::runtime_error("unknown init mode '" + name +
                             "' (expected random|uniform_forward|from_lloyd)");
}

const char* to_string(InitMode mode) {
    switch (mode) {
        case InitMode::random: return "random";
        case InitMode::uniform_forward: return "uniform_forward";
        case InitMode::from_lloyd: return "from_lloyd";
    }
    return "unknown";
}

std::vector<int> phi_histogram(const std::vector<double>& phis) {
    std::vector<int> bins(101, 0);
    for (double phi : phis) {
        if (phi < 0.9) {
            ++bins[0];
        } else {
            int k = static_cast<int>((phi - 0.9) / 0.001);
            if (k > 99) k = 99;
            ++bins[k + 1];
        }
    }
    return bins;
}

double interquartile_range(std::vector<double> values) {
    if (values.size() < 2) return 0.0;
    std::sort(values.begin(), values.end());
    const auto quartile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        if (lo + 1 >= values.size()) return values.back();
        return values[lo] + frac * (values[lo + 1] - values[lo]);
    };
    return quartile(0.75) - quartile(0.25);
}

ContinuousArtifacts cmd_continuous(const ExperimentConfig& cfg,
                                   const std::filesystem::path& out_dir) {
    const EnsembleSpec spec = make_spec(cfg);
    std::filesystem::create_directories(out_dir);

    const double t0 = now_s();
    const auto res = optimize_continuous(spec, parabolic_initial_pulse(spec), continuous_options(cfg));
    const double wall = now_s() - t0;

    ContinuousArtifacts art;
    art.pulse = res.pulse;
    art.phi = res.phi;
    art.iterations = res.trace.iterations;
    art.reason = to_string(res.trace.reason);
    art.trace = res.trace.phi;
    art.pulse_file = out_dir / "continuous.pulse";

    write_phase_pulse(art.pulse_file, res.pulse, spec.dt);
    verify_phase_export(spec, art.pulse_file, res.phi);
    write_trace_csv(out_dir / "continuous_trace.csv", res.trace.phi);
    write_summary(out_dir / "continuous_summary.txt",
                  {{"algorithm", "continuous"},
                   {"n_steps", std::to_string(spec.n_steps)},
                   {"n_off", std::to_string(spec.n_offsets())},
                   {"phi", format_g17(res.phi)},
                   {"iterations", std::to_string(res.trace.iterations)},
                   {"termination", art.reason},
                   {"wall_time_s", format_seconds(wall)}});
    return art;
}

CampaignResult run_discrete_campaign(const ExperimentConfig& cfg, const EnsembleSpec& spec,
                                     int m, InitMode init, const PhasePulse* lloyd_source) {
    if (m < 1) throw std::invalid_argument("run_discrete_campaign: m < 1");
    const auto opts = discrete_options(cfg);
    const std::uint64_t campaign_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(m));
    const int n_real = cfg.n_realizations;

    DiscretePulse shared_init;
    if (init == InitMode::uniform_forward) {
        shared_init = init_uniform_forward(spec, m);
    } else if (init == InitMode::from_lloyd) {
        if (!lloyd_source)
            throw std::invalid_argument("from_lloyd init requires a continuous pulse");
        const auto lr = run_lloyd(lloyd_source->theta, m, cfg.lloyd_epsilon, 10000);
        shared_init = to_discrete_pulse(lr.quantized, lr.codebook.centroids);
    }

    CampaignResult out;
    out.m = m;
    out.init = init;
    out.rows.resize(n_real);
    std::vector<std::vector<double>> traces(n_real);
    std::vector<DiscretePulse> pulses(n_real);
    std::string error;

    const double t0 = now_s();
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < n_real; ++r) {
        try {
            const std::uint64_t rseed = derive_seed(campaign_seed, static_cast<std::uint64_t>(r));
            const double tr0 = now_s();
            const DiscretePulse dp0 = (init == InitMode::random)
                                          ? init_random(spec.n_steps, m, rseed)
                                          : shared_init;
            auto res = optimize_discrete(spec, dp0, opts);
            out.rows[r] = {r, rseed, res.phi, res.trace.iterations, now_s() - tr0};
            traces[r] = std::move(res.trace.phi);
            pulses[r] = std::move(res.pulse);
        } catch (const std::exception& e) {
#pragma omp critical
            error = e.what();
        }
    }
    out.wall_s = now_s() - t0;
    if (!error.empty()) throw std::runtime_error("campaign realization failed: " + error);

    out.best_index = 0;
    for (int r = 1; r < n_real; ++r)
        if (out.rows[r].phi > out.rows[out.best_index].phi) out.best_index = r;

    std::vector<double> phis(n_real);
    for (int r = 0; r < n_real; ++r) phis[r] = out.rows[r].phi;
    out.phi_best = phis[out.best_index];
    out.phi_mean = pairwise_sum(phis) / static_cast<double>(n_real);
    out.histogram = phi_histogram(phis);
    out.best_pulse = pulses[out.best_index];
    out.best_trace = traces[out.best_index];
    return out;
}

CampaignResult cmd_discrete(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                            InitMode init, const PhasePulse* lloyd_source) {
    const EnsembleSpec spec = make_spec(cfg);
    std::filesystem::create_directories(out_dir);
    const auto result = run_discrete_campaign(cfg, spec, cfg.m, init, lloyd_source);
    const std::string base = "discrete_M" + std::to_string(cfg.m) + "_" + to_string(init);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(result.rows.size());
    for (const auto& row : result.rows)
        rows.push_back({std::to_string(row.realization), std::to_string(row.seed),
                        format_g17(row.phi), std::to_string(row.iterations)});
    write_csv(out_dir / (base + "_realizations.csv"), {"realization", "seed", "phi", "iterations"},
              rows);

    std::vector<std::vector<std::string>> hist;
    hist.push_back({format_g17(-1.0), format_g17(0.9), std::to_string(result.histogram[0])});
    for (int k = 0; k < 100; ++k)
        hist.push_back({format_g17(0.9 + 0.001 * k), format_g17(0.9 + 0.001 * (k + 1)),
                        std::to_string(result.histogram[k + 1])});
    write_csv(out_dir / (base + "_histogram.csv"), {"bin_lo", "bin_hi", "count"}, hist);

    const auto dpulse_file = out_dir / (base + "_best.dpulse");
    const auto pulse_file = out_dir / (base + "_best.pulse");
    write_discrete_pulse(dpulse_file, result.best_pulse);
    verify_discrete_export(spec, dpulse_file, result.phi_best);
    write_phase_pulse(pulse_file, materialize(result.best_pulse), spec.dt);
    verify_phase_export(spec, pulse_file, result.phi_best);
    write_trace_csv(out_dir / (base + "_best_trace.csv"), result.best_trace);

    write_summary(out_dir / (base + "_summary.txt"),
                  {{"algorithm", "discrete"},
                   {"m", std::to_string(result.m)},
                   {"init", to_string(init)},
                   {"n_realizations", std::to_string(cfg.n_realizations)},
                   {"master_seed", std::to_string(cfg.seed)},
                   {"phi_best", format_g17(result.phi_best)},
                   {"phi_mean", format_g17(result.phi_mean)},
                   {"best_realization", std::to_string(result.best_index)},
                   {"best_seed", std::to_string(result.rows[result.best_index].seed)},
                   {"best_iterations", std::to_string(result.rows[result.best_index].iterations)},
                   {"wall_time_s", format_seconds(result.wall_s)}});
    return result;
}

LloydArtifacts cmd_lloyd(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         const PhasePulse& continuous_pulse) {
    const EnsembleSpec spec = make_spec(cfg);
    if (continuous_pulse.n_steps() != spec.n_steps)
        throw std::runtime_error("lloyd: continuous pulse length does not match the configuration");
    std::filesystem::create_directories(out_dir);

    const auto lr = run_lloyd(continuous_pulse.theta, cfg.m, cfg.lloyd_epsilon, 10000);
    LloydArtifacts art;
    art.pulse = to_discrete_pulse(lr.quantized, lr.codebook.centroids);
    art.phi = evaluate_phi(spec, materialize(art.pulse));
    art.phi_continuous = evaluate_phi(spec, continuous_pulse);
    art.distortion = lr.codebook.distortion;
    art.iterations = lr.codebook.iterations;

    const std::string base = "lloyd_M" + std::to_string(cfg.m);
    const auto dpulse_file = out_dir / (base + ".dpulse");
    const auto pulse_file = out_dir / (base + ".pulse");
    write_discrete_pulse(dpulse_file, art.pulse);
    verify_discrete_export(spec, dpulse_file, art.phi);
    write_phase_pulse(pulse_file, materialize(art.pulse), spec.dt);
    verify_phase_export(spec, pulse_file, art.phi);

    std::vector<std::vector<std::string>> jrows;
    for (std::size_t k = 0; k < lr.distortion_trace.size(); ++k)
        jrows.push_back({std::to_string(k + 1), format_g17(lr.distortion_trace[k])});
    write_csv(out_dir / (base + "_distortion.csv"), {"iteration", "J"}, jrows);

    write_summary(out_dir / (base + "_summary.txt"),
                  {{"algorithm", "lloyd"},
                   {"m", std::to_string(cfg.m)},
                   {"phi", format_g17(art.phi)},
                   {"phi_continuous", format_g17(art.phi_continuous)},
                   {"distortion", format_g17(art.distortion)},
                   {"iterations", std::to_string(art.iterations)}});
    return art;
}

std::vector<CompareRow> cmd_compare(const ExperimentConfig& cfg,
                                    const std::filesystem::path& out_dir,
                                    const std::vector<int>& m_list,
                                    const PhasePulse& continuous_pulse) {
    if (m_list.empty()) throw std::invalid_argument("compare: empty m list");
    const EnsembleSpec spec = make_spec(cfg);
    std::filesystem::create_directories(out_dir);
    const double phi_cont = evaluate_phi(spec, continuous_pulse);

    std::vector<CompareRow> table;
    for (int m : m_list) {
        const auto campaign = run_discrete_campaign(cfg, spec, m, InitMode::random);
        const auto lr = run_lloyd(continuous_pulse.theta, m, cfg.lloyd_epsilon, 10000);
        const auto lq = to_discrete_pulse(lr.quantized, lr.codebook.centroids);
        const double phi_lloyd = evaluate_phi(spec, materialize(lq));
        table.push_back({m, campaign.phi_best, phi_lloyd, phi_cont});
    }

    std::vector<std::vector<std::string>> rows;
    for (const auto& row : table)
        rows.push_back({std::to_string(row.m), format_g17(row.phi_discrete_grape),
                        format_g17(row.phi_lloyd), format_g17(row.phi_continuous)});
    write_csv(out_dir / "compare.csv", {"m", "phi_discrete_grape", "phi_lloyd", "phi_continuous"},
              rows);
    return table;
}

std::vector<oracles::OracleReport> run_oracle_checks(std::uint64_t seed) {
    using oracles::OracleReport;
    std::vector<OracleReport> reports;
    SplitMix64 rng(seed);

    // analytic gradient against central finite differences
    for (int t = 0; t < 5; ++t) {
        const int n = 4 + static_cast<int>(rng.next_below(5));
        const int n_off = 1 + static_cast<int>(rng.next_below(3));
        const double omega_max = two_pi * 1e4;
        const double dt = 0.5e-6;
        const EnsembleSpec spec = EnsembleSpec::inversion(omega_max, two_pi * 1e4, n * dt, dt, n_off);
        PhasePulse pulse;
        for (int j = 0; j < n; ++j) pulse.theta.push_back(rng.next_angle());

        const auto g = phase_gradient(spec, pulse);
        const auto g_fd = oracles::fd_gradient(spec, pulse, 1e-6);
        double diff2 = 0.0, fd2 = 0.0, g2 = 0.0, dp = 0.0;
        for (int j = 0; j < n; ++j) {
            diff2 += (g[j] - g_fd[j]) * (g[j] - g_fd[j]);
            fd2 += g_fd[j] * g_fd[j];
            g2 += g[j] * g[j];
            dp += g[j] * g_fd[j];
        }
        const double dev = std::sqrt(diff2);
        const double fd_norm = std::sqrt(fd2);
        OracleReport rep;
        rep.oracle = "fd-gradient";
        rep.instance = "N=" + std::to_string(n) + " n_off=" + std::to_string(n_off) +
                       " trial=" + std::to_string(t);
        rep.oracle_value = fd_norm;
        rep.candidate_value = std::sqrt(g2);
        rep.deviation = dev;
        rep.pass = dev <= 0.07 * fd_norm + 1e-9 && (fd_norm <= 1e-8 || dp > 0.0);
        reports.push_back(rep);
    }

    // greedy sweep never beats the exhaustive mapping search
    for (int t = 0; t < 4; ++t) {
        const int n = 3 + static_cast<int>(rng.next_below(3));
        const int m = 2 + static_cast<int>(rng.next_below(2));
        const int n_off = 1 + static_cast<int>(rng.next_below(2));
        const double dt = 0.5e-6;
        const double scale = 0.5 + rng.next_double();
        const EnsembleSpec spec = EnsembleSpec::inversion(two_pi * 1e4, scale * two_pi * 1e5,
                                                          n * dt, dt, n_off);
        DiscretePulse dp0 = init_random(n, m, rng.next_u64());
        SweepResult sw = mapping_sweep(spec, dp0);
        for (int pass = 0; pass < 8 && sw.changed; ++pass) sw = mapping_sweep(spec, sw.pulse);
        const double phi_sweep = evaluate_phi(spec, materialize(sw.pulse));
        const auto best = oracles::brute_force_mapping(spec, sw.pulse.values);

        OracleReport rep;
        rep.oracle = "brute-force-mapping";
        rep.instance = "N=" + std::to_string(n) + " M=" + std::to_string(m) +
                       " n_off=" + std::to_string(n_off) + " trial=" + std::to_string(t);
        rep.oracle_value = best.phi;
        rep.candidate_value = phi_sweep;
        rep.deviation = std::max(0.0, phi_sweep - best.phi);
        rep.pass = phi_sweep <= best.phi;
        reports.push_back(rep);
    }

    // Lloyd distortion never beats the exhaustive contiguous-arc search
    for (int t = 0; t < 4; ++t) {
        const int n = 6 + static_cast<int>(rng.next_below(6));
        const int m = 2 + static_cast<int>(rng.next_below(3));
        std::vector<double> phases(n);
        for (double& p : phases) p = rng.next_angle();
        const auto lr = run_lloyd(phases, m, 1e-10, 10000);
        const auto best = oracles::exhaustive_quantizer(phases, m);

        OracleReport rep;
        rep.oracle = "exhaustive-quantizer";
        rep.instance = "N=" + std::to_string(n) + " M=" + std::to_string(m) +
                       " trial=" + std::to_string(t);
        rep.oracle_value = best.distortion;
        rep.candidate_value = lr.codebook.distortion;
        rep.deviation = std::max(0.0, best.distortion - lr.codebook.distortion);
        rep.pass = lr.codebook.distortion >= best.distortion - 1e-12;
        reports.push_back(rep);
    }
    return reports;
}

} // namespace pulseforge
