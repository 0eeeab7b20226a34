#include "pulseforge/pulse_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pulseforge {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& msg) {
    throw std::runtime_error(path.string() + ": " + msg);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    return out;
}

double parse_double(const std::filesystem::path& path, const std::string& s) {
    double v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        fail(path, "invalid number '" + s + "'");
    return v;
}

long parse_long(const std::filesystem::path& path, const std::string& s) {
    long v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        fail(path, "invalid integer '" + s + "'");
    return v;
}

// Header fields look like "N=360"; returns the value part.
std::string field_value(const std::filesystem::path& path, const std::string& token,
                        const std::string& name) {
    if (token.rfind(name + "=", 0) != 0) fail(path, "expected '" + name + "=' in header");
    return token.substr(name.size() + 1);
}

} // namespace

void write_phase_pulse(const std::filesystem::path& path, const PhasePulse& pulse, double dt_s) {
    auto out = open_out(path);
    out << "# pulseforge phase-pulse v1 N=" << pulse.n_steps() << " dt_s=" << format_g17(dt_s)
        << "\n";
    for (double t : pulse.theta) out << format_g17(t) << "\n";
    if (!out) fail(path, "write failed");
}

LoadedPhasePulse read_phase_pulse(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open pulse file");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    std::istringstream hdr(line);
    std::string hash, magic, kind, version, ntok, dttok;
    hdr >> hash >> magic >> kind >> version >> ntok >> dttok;
    if (hash != "#" || magic != "pulseforge" || kind != "phase-pulse" || version != "v1")
        fail(path, "not a pulseforge phase-pulse v1 file");
    const long n = parse_long(path, field_value(path, ntok, "N"));
    if (n < 0) fail(path, "negative N");
    LoadedPhasePulse lp;
    lp.dt_s = parse_double(path, field_value(path, dttok, "dt_s"));
    lp.pulse.theta.reserve(n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        lp.pulse.theta.push_back(parse_double(path, line));
    }
    if (static_cast<long>(lp.pulse.theta.size()) != n)
        fail(path, "expected " + std::to_string(n) + " phases, found " +
                       std::to_string(lp.pulse.theta.size()));
    return lp;
}

void write_discrete_pulse(const std::filesystem::path& path, const DiscretePulse& dp) {
    auto out = open_out(path);
    out << "# pulseforge discrete-pulse v1 N=" << dp.n_steps() << " M=" << dp.n_values() << "\n";
    for (int k = 0; k < dp.n_values(); ++k)
        out << "v " << (k + 1) << " " << format_g17(dp.values[k]) << "\n";
    for (int j = 0; j < dp.n_steps(); ++j) out << "p " << (dp.mapping[j] + 1) << "\n";
    if (!out) fail(path, "write failed");
}

DiscretePulse read_discrete_pulse(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open pulse file");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    std::istringstream hdr(line);
    std::string hash, magic, kind, version, ntok, mtok;
    hdr >> hash >> magic >> kind >> version >> ntok >> mtok;
    if (hash != "#" || magic != "pulseforge" || kind != "discrete-pulse" || version != "v1")
        fail(path, "not a pulseforge discrete-pulse v1 file");
    const long n = parse_long(path, field_value(path, ntok, "N"));
    const long m = parse_long(path, field_value(path, mtok, "M"));
    if (n < 0 || m < 1) fail(path, "bad N or M");

    DiscretePulse dp;
    dp.values.resize(m);
    std::vector<bool> seen(m, false);
    for (long k = 0; k < m; ++k) {
        if (!std::getline(in, line)) fail(path, "truncated codebook");
        std::istringstream row(line);
        std::string tag, idx, val;
        row >> tag >> idx >> val;
        if (tag != "v") fail(path, "expected codebook line 'v <index> <radians>'");
        const long i = parse_long(path, idx);
        if (i < 1 || i > m) fail(path, "codebook index out of range");
        dp.values[i - 1] = parse_double(path, val);
        seen[i - 1] = true;
    }
    for (long k = 0; k < m; ++k)
        if (!seen[k]) fail(path, "codebook entry " + std::to_string(k + 1) + " missing");

    dp.mapping.resize(n);
    for (long j = 0; j < n; ++j) {
        if (!std::getline(in, line)) fail(path, "truncated mapping");
        std::istringstream row(line);
        std::string tag, idx;
        row >> tag >> idx;
        if (tag != "p") fail(path, "expected mapping line 'p <index>'");
        const long i = parse_long(path, idx);
        if (i < 1 || i > m) fail(path, "mapping index out of range");
        dp.mapping[j] = static_cast<int>(i - 1);
    }
    return dp;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) fail(path, "write failed");
}

void write_summary(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
    auto out = open_out(path);
    for (const auto& [k, v] : entries) out << k << "=" << v << "\n";
    if (!out) fail(path, "write failed");
}

} // namespace pulseforge
