#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "pulseforge/experiment.hpp"
#include "pulseforge/pulse_io.hpp"

namespace fs = std::filesystem;
using namespace pulseforge;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> m;
    std::optional<int> realizations;
    int workers = 0;
    std::string init = "random";
    std::string pulse_path;
    std::vector<int> m_list;
};

ExperimentConfig load_config(const GlobalArgs& args) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = parse_config(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.m) cfg.m = *args.m;
    if (args.realizations) cfg.n_realizations = *args.realizations;
    cfg.validate();
    return cfg;
}

// The continuous reference comes from --pulse when given, otherwise from a
// fresh continuous run whose artifacts land in the output directory.
PhasePulse continuous_reference(const GlobalArgs& args, const ExperimentConfig& cfg) {
    if (!args.pulse_path.empty()) return read_phase_pulse(args.pulse_path).pulse;
    std::printf("no --pulse given; running the continuous optimizer first\n");
    const auto art = cmd_continuous(cfg, args.out_dir);
    std::printf("continuous reference: phi=%.6f (%d iterations, %s)\n", art.phi, art.iterations,
                art.reason.c_str());
    return art.pulse;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-pulse optimal control for spin ensembles"};
    app.require_subcommand(1);

    GlobalArgs args;
    app.add_option("--config", args.config_path, "key=value configuration file");
    app.add_option("--seed", args.seed, "master seed (overrides config)");
    app.add_option("--out", args.out_dir, "output directory")->capture_default_str();
    app.add_option("--workers", args.workers, "worker thread count (0 = all cores)");
    app.add_option("--m", args.m, "codebook size (overrides config)");
    app.add_option("--m-list", args.m_list, "codebook sizes for compare")->delimiter(',');
    app.add_option("--realizations", args.realizations, "campaign size (overrides config)");
    app.add_option("--init", args.init, "discrete init: random|uniform_forward|from_lloyd")
        ->capture_default_str();
    app.add_option("--pulse", args.pulse_path, "continuous pulse file for lloyd/compare/from_lloyd");

    auto* c_cont = app.add_subcommand("continuous", "continuous phase GRAPE on the benchmark");
    auto* c_disc = app.add_subcommand("discrete", "multi-start discrete GRAPE campaign");
    auto* c_lloyd = app.add_subcommand("lloyd", "quantize a continuous pulse with circular Lloyd");
    auto* c_comp = app.add_subcommand("compare", "discrete GRAPE vs Lloyd over a list of M");
    auto* c_oracle = app.add_subcommand("oracle-check", "run the independent oracle battery");

    CLI11_PARSE(app, argc, argv);

    if (args.workers > 0) omp_set_num_threads(args.workers);

    try {
        const ExperimentConfig cfg = load_config(args);
        const fs::path out = args.out_dir;

        if (c_cont->parsed()) {
            const auto art = cmd_continuous(cfg, out);
            std::printf("continuous: phi=%.6f iterations=%d termination=%s\n", art.phi,
                        art.iterations, art.reason.c_str());
            std::printf("wrote %s\n", art.pulse_file.string().c_str());
        } else if (c_disc->parsed()) {
            const InitMode mode = parse_init_mode(args.init);
            PhasePulse ref;
            const PhasePulse* ref_ptr = nullptr;
            if (mode == InitMode::from_lloyd) {
                ref = continuous_reference(args, cfg);
                ref_ptr = &ref;
            }
            const auto result = cmd_discrete(cfg, out, mode, ref_ptr);
            std::printf("discrete M=%d (%s): best phi=%.6f mean phi=%.6f over %d realizations\n",
                        result.m, to_string(mode), result.phi_best, result.phi_mean,
                        static_cast<int>(result.rows.size()));
        } else if (c_lloyd->parsed()) {
            const PhasePulse ref = continuous_reference(args, cfg);
            const auto art = cmd_lloyd(cfg, out, ref);
            std::printf("lloyd M=%d: phi=%.6f (continuous %.6f), distortion=%.6g after %d iterations\n",
                        cfg.m, art.phi, art.phi_continuous, art.distortion, art.iterations);
        } else if (c_comp->parsed()) {
            if (args.m_list.empty()) {
                std::fprintf(stderr, "compare: --m-list is required\n");
                return 2;
            }
            const PhasePulse ref = continuous_reference(args, cfg);
            const auto table = cmd_compare(cfg, out, args.m_list, ref);
            std::printf("%4s %18s %12s %16s\n", "M", "phi_discrete", "phi_lloyd", "phi_continuous");
            for (const auto& row : table)
                std::printf("%4d %18.6f %12.6f %16.6f\n", row.m, row.phi_discrete_grape,
                            row.phi_lloyd, row.phi_continuous);
            std::printf("wrote %s\n", (out / "compare.csv").string().c_str());
        } else if (c_oracle->parsed()) {
            const auto reports = run_oracle_checks(cfg.seed);
            bool all_pass = true;
            for (const auto& r : reports) {
                std::printf("[%s] %-22s %-28s oracle=%.9g candidate=%.9g deviation=%.3g\n",
                            r.pass ? "ok" : "FAIL", r.oracle.c_str(), r.instance.c_str(),
                            r.oracle_value, r.candidate_value, r.deviation);
                all_pass = all_pass && r.pass;
            }
            if (!all_pass) return 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
