#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwlab/config.hpp"
#include "rwlab/functionals.hpp"

namespace rwlab::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kUsageError = 2, kNumericalError = 3 };

struct CommandContext {
  RunConfig config;
  std::filesystem::path out_dir;
  std::ostream* out = nullptr;  ///< progress lines
  std::ostream* err = nullptr;  ///< diagnostics
};

int cmd_verify_potential(const CommandContext& ctx);
int cmd_critical_curve(const CommandContext& ctx);
int cmd_evolve_linear(const CommandContext& ctx);
int cmd_evolve_semilinear(const CommandContext& ctx);
int cmd_convergence(const CommandContext& ctx);
int cmd_decay_report(const CommandContext& ctx);

/// Dispatches by subcommand name and maps exceptions onto exit codes:
/// ConfigError/DomainError -> 2, NumericalError -> 3.
int run_command(const std::string& name, const CommandContext& ctx);

const std::vector<std::string>& command_names();

/// Energy series of one (l, m) mode.
struct ModeSeries {
  int l = 0;
  int m = 0;
  std::vector<EnergyBreakdown> energy;
};

/// Sums energies row by row; max columns take the maximum. Rows must align.
std::vector<EnergyBreakdown> total_series(const std::vector<ModeSeries>& modes);

/// E(t_end) / max{E(t) : t <= t_end / 2} for the Morawetz energy.
double morawetz_growth_ratio(const std::vector<EnergyBreakdown>& energy);

/// {experiment, fit, compliance, halftimes, modes: [...]}.
nlohmann::json decay_report(const std::vector<ModeSeries>& modes, const AnalysisConfig& analysis,
                            const std::string& experiment);

}  // namespace rwlab::cli
