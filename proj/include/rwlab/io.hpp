#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwlab/evolve.hpp"
#include "rwlab/functionals.hpp"
#include "rwlab/geometry.hpp"
#include "rwlab/potential.hpp"

namespace rwlab::io {

/// %.15g, with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double v);

inline constexpr const char* kEnergyHeader =
    "t,e_basic,e_morawetz,mor_ubar_flux,mor_u_flux,mor_potential,e_local,"
    "trapping_integral,max_abs_psi,envelope_ratio";

void write_energy_csv(const std::filesystem::path& path, std::span<const EnergyBreakdown> rows);
/// Reads a file written by write_energy_csv. Fields not stored in the CSV stay zero.
std::vector<EnergyBreakdown> read_energy_csv(const std::filesystem::path& path);

/// Columns x, r, psi, dpsi_dt.
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap,
                        const TortoiseGrid& grid);

/// Columns t, psi, phi.
void write_probe_csv(const std::filesystem::path& path, std::span<const ProbeSample> probe);

struct CriticalRow {
  double lambda = 0.0;
  double r_crit = 0.0;
  double x0 = 0.0;
  double q_at_crit = 0.0;
  double q2_at_crit = 0.0;
};

CriticalRow critical_row(double lambda, const SchwarzschildParams& params);
void write_critical_csv(std::ostream& out, std::span<const CriticalRow> rows);

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const RepulsiveConstants& constants);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace rwlab::io
