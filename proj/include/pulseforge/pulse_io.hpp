#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pulseforge/discrete_pulse.hpp"
#include "pulseforge/spin_dynamics.hpp"

namespace pulseforge {

/// Shortest-exact decimal form (17 significant digits); doubles written this
/// way read back bit-identically.
std::string format_g17(double v);

// Phase pulse file:
//   # pulseforge phase-pulse v1 N=<n> dt_s=<dt>
// followed by N lines of phase in radians.
void write_phase_pulse(const std::filesystem::path& path, const PhasePulse& pulse, double dt_s);

struct LoadedPhasePulse {
    PhasePulse pulse;
    double dt_s = 0.0;
};
LoadedPhasePulse read_phase_pulse(const std::filesystem::path& path);

// Discrete pulse file:
//   # pulseforge discrete-pulse v1 N=<n> M=<m>
// followed by M codebook lines "v <index> <radians>" and N mapping lines
// "p <index>"; indices are 1-based on disk.
void write_discrete_pulse(const std::filesystem::path& path, const DiscretePulse& dp);
DiscretePulse read_discrete_pulse(const std::filesystem::path& path);

/// CSV with a header row; cells are written verbatim.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Flat key=value summary file, one pair per line, in the given order.
void write_summary(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& entries);

} // namespace pulseforge
