#include "rwlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rwlab/errors.hpp"

namespace rwlab::io {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_number(v);
    first = false;
  }
  out << '\n';
}

double parse_field(const std::string& s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

void write_energy_csv(const std::filesystem::path& path, std::span<const EnergyBreakdown> rows) {
  auto out = open_out(path);
  out << kEnergyHeader << '\n';
  for (const auto& e : rows) {
    row(out, {e.t, e.e_basic, e.e_morawetz, e.morawetz_terms.ubar_flux, e.morawetz_terms.u_flux,
              e.morawetz_terms.potential_term, e.e_local, e.trapping_integral, e.max_abs_psi,
              e.max_abs_rphi_weighted});
  }
}

std::vector<EnergyBreakdown> read_energy_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open energy CSV");
  std::string line;
  if (!std::getline(in, line) || line != kEnergyHeader) {
    throw ConfigError(path.string(), "unexpected energy CSV header");
  }
  std::vector<EnergyBreakdown> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string field;
    try {
      while (std::getline(ss, field, ',')) v.push_back(parse_field(field));
    } catch (const std::exception&) {
      throw ConfigError(path.string(), "bad number on line " + std::to_string(lineno));
    }
    if (v.size() != 10) {
      throw ConfigError(path.string(), "expected 10 columns on line " + std::to_string(lineno));
    }
    EnergyBreakdown e;
    e.t = v[0];
    e.e_basic = v[1];
    e.e_morawetz = v[2];
    e.morawetz_terms = {v[3], v[4], v[5]};
    e.e_local = v[6];
    e.trapping_integral = v[7];
    e.max_abs_psi = v[8];
    e.max_abs_rphi_weighted = v[9];
    rows.push_back(e);
  }
  return rows;
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap,
                        const TortoiseGrid& grid) {
  auto out = open_out(path);
  out << "x,r,psi,dpsi_dt\n";
  const auto x = grid.x();
  const auto r = grid.r();
  for (std::size_t i = 0; i < grid.size(); ++i) row(out, {x[i], r[i], snap.psi[i], snap.dpsi_dt[i]});
}

void write_probe_csv(const std::filesystem::path& path, std::span<const ProbeSample> probe) {
  auto out = open_out(path);
  out << "t,psi,phi\n";
  for (const auto& p : probe) row(out, {p.t, p.psi, p.phi});
}

CriticalRow critical_row(double lambda, const SchwarzschildParams& params) {
  CriticalRow c;
  c.lambda = lambda;
  c.r_crit = critical_radius(lambda, params);
  c.x0 = tortoise_from_radius(c.r_crit, params);
  c.q_at_crit = potential_value(lambda, c.r_crit, params);
  c.q2_at_crit = second_derivative_at_critical(lambda, params);
  return c;
}

void write_critical_csv(std::ostream& out, std::span<const CriticalRow> rows) {
  out << "lambda,r_crit,x0,q_at_crit,q2_at_crit\n";
  for (const auto& c : rows) row(out, {c.lambda, c.r_crit, c.x0, c.q_at_crit, c.q2_at_crit});
}

json to_json(const RepulsiveConstants& constants) {
  return json{{"C", constants.c}, {"b1", constants.b1}, {"b2", constants.b2}};
}

json to_json(const ConditionReport& report) {
  json modes = json::array();
  for (const auto& m : report.modes) {
    json conds = json::array();
    for (std::size_t k = 0; k < m.conditions.size(); ++k) {
      const auto& c = m.conditions[k];
      conds.push_back({{"name", std::string(kConditionNames[k])},
                       {"pass", c.pass},
                       {"worst_margin", c.worst_margin},
                       {"worst_location", c.worst_location}});
    }
    modes.push_back({{"lambda", m.lambda}, {"conditions", conds}, {"constants", to_json(report.constants)}});
  }
  return modes;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace rwlab::io
