#include "pulseforge/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pulseforge/angles.hpp"

namespace pulseforge {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_number(const std::string& origin, int line, const std::string& key, const std::string& v) {
    T out{};
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto r = std::from_chars(first, last, out);
    if (r.ec != std::errc{} || r.ptr != last)
        fail(origin, line, "value for '" + key + "' is not a valid number: '" + v + "'");
    return out;
}

} // namespace

void ExperimentConfig::validate() const {
    if (!(omega_max_hz > 0.0)) throw std::runtime_error("config: omega_max_hz must be > 0");
    if (!(omega0_hz > 0.0)) throw std::runtime_error("config: omega0_hz must be > 0");
    if (!(tf_s > 0.0)) throw std::runtime_error("config: tf_s must be > 0");
    if (!(dt_s > 0.0)) throw std::runtime_error("config: dt_s must be > 0");
    if (n_off < 1) throw std::runtime_error("config: n_off must be >= 1");
    if (m < 1) throw std::runtime_error("config: m must be >= 1");
    if (n_realizations < 1) throw std::runtime_error("config: n_realizations must be >= 1");
    if (max_iters && *max_iters < 1) throw std::runtime_error("config: max_iters must be >= 1");
    if (!(tol_delta_phi > 0.0)) throw std::runtime_error("config: tol_delta_phi must be > 0");
    if (!(lloyd_epsilon > 0.0)) throw std::runtime_error("config: lloyd_epsilon must be > 0");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(origin, line, "empty key");

        if (key == "omega_max_hz") cfg.omega_max_hz = parse_number<double>(origin, line, key, val);
        else if (key == "omega0_hz") cfg.omega0_hz = parse_number<double>(origin, line, key, val);
        else if (key == "tf_s") cfg.tf_s = parse_number<double>(origin, line, key, val);
        else if (key == "dt_s") cfg.dt_s = parse_number<double>(origin, line, key, val);
        else if (key == "n_off") cfg.n_off = parse_number<int>(origin, line, key, val);
        else if (key == "m") cfg.m = parse_number<int>(origin, line, key, val);
        else if (key == "n_realizations") cfg.n_realizations = parse_number<int>(origin, line, key, val);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(origin, line, key, val);
        else if (key == "max_iters") cfg.max_iters = parse_number<int>(origin, line, key, val);
        else if (key == "tol_delta_phi") cfg.tol_delta_phi = parse_number<double>(origin, line, key, val);
        else if (key == "lloyd_epsilon") cfg.lloyd_epsilon = parse_number<double>(origin, line, key, val);
        else fail(origin, line, "unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

EnsembleSpec make_spec(const ExperimentConfig& cfg) {
    cfg.validate();
    return EnsembleSpec::inversion(two_pi * cfg.omega_max_hz, two_pi * cfg.omega0_hz,
                                   cfg.tf_s, cfg.dt_s, cfg.n_off);
}

GrapeOptions continuous_options(const ExperimentConfig& cfg) {
    GrapeOptions opt;
    opt.max_iters = cfg.max_iters.value_or(5000);
    opt.tol_delta_phi = cfg.tol_delta_phi;
    return opt;
}

DiscreteGrapeOptions discrete_options(const ExperimentConfig& cfg) {
    DiscreteGrapeOptions opt;
    opt.grape.max_iters = cfg.max_iters.value_or(2000);
    opt.grape.tol_delta_phi = cfg.tol_delta_phi;
    return opt;
}

} // namespace pulseforge
