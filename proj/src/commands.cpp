#include "rwlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

#include "rwlab/analysis.hpp"
#include "rwlab/errors.hpp"
#include "rwlab/evolve.hpp"
#include "rwlab/io.hpp"
#include "rwlab/manufactured.hpp"

namespace rwlab::cli {

using nlohmann::json;

namespace {

std::ostream& out_of(const CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }
std::ostream& err_of(const CommandContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const VerificationConfig& require_verification(const RunConfig& c) {
  if (!c.verification) throw ConfigError("verification", "this command needs a verification block");
  return *c.verification;
}

std::vector<PotentialTable> verification_family(const VerificationConfig& v, const TortoiseGrid& grid,
                                                const SchwarzschildParams& params) {
  std::vector<PotentialTable> family;
  const auto x = grid.x();
  for (double lambda : v.lambdas) {
    switch (v.fixture) {
      case VerificationFixture::ReggeWheeler:
        family.push_back(build_potential_table(lambda, grid, params));
        break;
      case VerificationFixture::SyntheticSquare: {
        std::vector<double> q(grid.size()), dq(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
          q[i] = x[i] * x[i];
          dq[i] = 2.0 * x[i];
        }
        family.push_back(PotentialTable::from_samples(lambda, q, dq, 0.0, 3.0 * params.mass()));
        break;
      }
      case VerificationFixture::SyntheticNegative:
        family.push_back(PotentialTable::from_samples(lambda, std::vector<double>(grid.size(), -1.0),
                                                      std::vector<double>(grid.size(), 0.0), 0.0,
                                                      3.0 * params.mass()));
        break;
    }
  }
  return family;
}

// First admissible candidate; used to name the failing condition when the
// search comes back empty.
RepulsiveConstants first_candidate(const ConstantSearchGrid& g, const TortoiseGrid& grid) {
  const double limit = (grid.x_max() - grid.x_min()) / 4.0;
  for (double b1 : g.b1) {
    for (double b2 : g.b2) {
      if (b1 > 0.0 && b1 < b2 && b2 < limit) return {g.c_values().front(), b1, b2};
    }
  }
  throw ConfigError("verification.b_grid", "no pair with b1 < b2 < width/4");
}

std::string mode_tag(int l, int m) { return "l" + std::to_string(l) + "_m" + std::to_string(m); }

double photon_sphere_probe(const RunConfig& c, const SchwarzschildParams& params) {
  return c.analysis.probe_x.value_or(params.photon_sphere_tortoise());
}

EvolveOptions evolve_options(const RunConfig& c, const SchwarzschildParams& params) {
  EvolveOptions o;
  o.t_final = c.t_final;
  o.courant = c.courant;
  o.energy_every = c.outputs.energy_every;
  o.snapshot_every = c.outputs.snapshot_every;
  o.window_radius = c.analysis.window_radius;
  o.probe_x = photon_sphere_probe(c, params);
  o.with_poincare = false;
  return o;
}

void write_mode_outputs(const std::filesystem::path& dir, int l, int m, const Trajectory& traj,
                        const TortoiseGrid& grid) {
  const std::string tag = mode_tag(l, m);
  io::write_energy_csv(dir / ("energy_" + tag + ".csv"), traj.energy);
  io::write_probe_csv(dir / ("probe_" + tag + ".csv"), traj.probe);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%04zu", k);
    io::write_snapshot_csv(dir / "snapshots" / ("snapshot_" + tag + "_" + idx + ".csv"),
                           traj.snapshots[k], grid);
  }
}

json fit_json(std::span<const TimeValue> series, const FitWindow& window) {
  try {
    const DecayFit f = fit_power_law(series, window);
    return {{"exponent", f.exponent},
            {"amplitude", f.amplitude},
            {"residual", f.residual_rms},
            {"points", f.points},
            {"window", {f.window.t_lo, f.window.t_hi}}};
  } catch (const DomainError& e) {
    return {{"error", e.what()}};
  }
}

// Largest relative change of the leapfrog energy before the pulse can reach
// either end of the grid.
json discrete_drift(const Trajectory& traj, const ProfileConfig& p, const TortoiseGrid& grid) {
  const double contact =
      std::min(p.center - grid.x_min(), grid.x_max() - p.center) - 6.0 * p.width;
  if (traj.energy.empty() || traj.energy.front().discrete_energy == 0.0) return nullptr;
  const double e0 = traj.energy.front().discrete_energy;
  double drift = 0.0;
  std::size_t used = 0;
  for (const auto& e : traj.energy) {
    if (e.t > contact) break;
    drift = std::max(drift, std::abs(e.discrete_energy - e0) / std::abs(e0));
    ++used;
  }
  if (used < 2) return nullptr;
  return {{"relative_drift", drift}, {"until_t", contact}};
}

// Mode-summed energy at the first and last snapshot, once with Q_lambda and
// once with the 3-D weights f (lambda^2/r^2 + M/r^3) on the potential term.
json assembled_energy(const std::vector<ModeConfig>& modes, const std::vector<Trajectory>& runs,
                      const TortoiseGrid& grid, const SchwarzschildParams& params) {
  const std::size_t n = grid.size();
  const std::size_t last = runs.front().snapshots.size() - 1;
  double q_first = 0.0, q_last = 0.0, w_first = 0.0, w_last = 0.0;
  std::vector<double> w(n);
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double lambda = ModeSpec::from_degree(modes[j].l, modes[j].m).lambda;
    const PotentialTable q = build_potential_table(lambda, grid, params);
    for (std::size_t i = 0; i < n; ++i) {
      const RadialPoint p{grid.r()[i], grid.r_minus_2m()[i], grid.f()[i]};
      w[i] = angular_energy_potential(lambda, p, params.mass());
    }
    const PotentialTable weights =
        PotentialTable::from_samples(lambda, w, std::vector<double>(n, 0.0), q.x0(), q.r_crit());
    const auto& snaps = runs[j].snapshots;
    q_first += basic_energy(snaps.front().view(), q, grid);
    q_last += basic_energy(snaps[last].view(), q, grid);
    w_first += basic_energy(snaps.front().view(), weights, grid);
    w_last += basic_energy(snaps[last].view(), weights, grid);
  }
  const auto& snaps = runs.front().snapshots;
  return json::array({{{"t", snaps.front().t}, {"mode_potential", q_first}, {"angular_weights", w_first}},
                      {{"t", snaps[last].t}, {"mode_potential", q_last}, {"angular_weights", w_last}}});
}

}  // namespace


std::vector<EnergyBreakdown> total_series(const std::vector<ModeSeries>& modes) {
  if (modes.empty()) return {};
  std::vector<EnergyBreakdown> total = modes.front().energy;
  for (std::size_t k = 1; k < modes.size(); ++k) {
    const auto& e = modes[k].energy;
    if (e.size() != total.size()) throw DomainError("total_series: modes recorded different times");
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto& t = total[i];
      t.e_basic += e[i].e_basic;
      t.e_morawetz += e[i].e_morawetz;
      t.morawetz_terms.ubar_flux += e[i].morawetz_terms.ubar_flux;
      t.morawetz_terms.u_flux += e[i].morawetz_terms.u_flux;
      t.morawetz_terms.potential_term += e[i].morawetz_terms.potential_term;
      t.e_local += e[i].e_local;
      t.trapping_integral += e[i].trapping_integral;
      t.discrete_energy += e[i].discrete_energy;
      t.max_abs_psi = std::max(t.max_abs_psi, e[i].max_abs_psi);
      t.max_abs_rphi_weighted = std::max(t.max_abs_rphi_weighted, e[i].max_abs_rphi_weighted);
      t.target_ratio = std::max(t.target_ratio, e[i].target_ratio);
    }
  }
  return total;
}

double morawetz_growth_ratio(const std::vector<EnergyBreakdown>& energy) {
  if (energy.empty()) throw DomainError("morawetz_growth_ratio: empty series");
  const double t_end = energy.back().t;
  double early = 0.0;
  for (const auto& e : energy) {
    if (e.t <= 0.5 * t_end) early = std::max(early, e.e_morawetz);
  }
  if (!(early > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return energy.back().e_morawetz / early;
}

json decay_report(const std::vector<ModeSeries>& modes, const AnalysisConfig& analysis,
                  const std::string& experiment) {
  json doc;
  doc["experiment"] = experiment;
  json per_mode = json::array();
  json halftimes = json::object();
  for (const auto& m : modes) {
    const auto local = local_energy_series(m.energy);
    double compliance = 0.0;
    for (const auto& e : m.energy) compliance = std::max(compliance, e.max_abs_rphi_weighted);
    const double half = local.empty() ? std::numeric_limits<double>::infinity()
                                      : trapping_halftime(local, analysis.drop_factor);
    halftimes[mode_tag(m.l, m.m)] = number_or_null(half);
    per_mode.push_back({{"l", m.l},
                        {"m", m.m},
                        {"fit", fit_json(local, analysis.fit_window)},
                        {"halftime", number_or_null(half)},
                        {"morawetz_ratio", m.energy.empty() ? json(nullptr)
                                                            : number_or_null(morawetz_growth_ratio(m.energy))},
                        {"compliance", {{"max_ratio", compliance}}}});
  }
  const auto total = total_series(modes);
  double compliance = 0.0;
  for (const auto& e : total) compliance = std::max(compliance, e.max_abs_rphi_weighted);
  doc["fit"] = fit_json(local_energy_series(total), analysis.fit_window);
  doc["compliance"] = {{"max_ratio", compliance}};
  doc["halftimes"] = halftimes;
  doc["drop_factor"] = analysis.drop_factor;
  doc["modes"] = per_mode;
  return doc;
}

int cmd_verify_potential(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const VerificationConfig& v = require_verification(c);
  const SchwarzschildParams params(c.mass);
  const TortoiseGrid grid = build_grid(v.grid.x_min, v.grid.x_max, v.grid.n, params);
  const auto family = verification_family(v, grid, params);

  const auto found = search_constants(family, grid, v.candidates);
  const RepulsiveConstants k = found ? *found : first_candidate(v.candidates, grid);
  const ConditionReport report = verify_conditions(family, k, grid);

  json doc;
  doc["feasible"] = found.has_value();
  doc["constants"] = found ? io::to_json(*found) : json(nullptr);
  doc["reports"] = io::to_json(report);
  if (!found) doc["tested_constants"] = io::to_json(k);
  io::write_json(ctx.out_dir / "verify_potential.json", doc);

  if (!found) {
    const auto name = report.first_failure();
    err_of(ctx) << "infeasible: " << (name ? std::string(*name) : std::string("no constants found"))
                << " fails\n";
    return kInfeasible;
  }
  out_of(ctx) << "feasible: C=" << io::format_number(k.c) << " b1=" << io::format_number(k.b1)
              << " b2=" << io::format_number(k.b2) << '\n';
  return kOk;
}

int cmd_critical_curve(const CommandContext& ctx) {
  const VerificationConfig& v = require_verification(ctx.config);
  const SchwarzschildParams params(ctx.config.mass);
  std::vector<io::CriticalRow> rows;
  for (double lambda : v.lambdas) rows.push_back(io::critical_row(lambda, params));
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream f(ctx.out_dir / "critical_curve.csv", std::ios::binary);
  if (!f) throw ConfigError("--out", "cannot write critical_curve.csv");
  io::write_critical_csv(f, rows);
  out_of(ctx) << "wrote " << rows.size() << " rows\n";
  return kOk;
}

int cmd_evolve_linear(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  if (c.modes.empty()) throw ConfigError("modes", "at least one mode is required");
  const SchwarzschildParams params(c.mass);
  const TortoiseGrid grid = build_grid(c.grid.x_min, c.grid.x_max, c.grid.n, params);
  const EvolveOptions opts = evolve_options(c, params);

  std::vector<ModeConfig> modes = c.modes;
  std::stable_sort(modes.begin(), modes.end(), [](const ModeConfig& a, const ModeConfig& b) {
    return a.l != b.l ? a.l < b.l : a.m < b.m;
  });
  for (std::size_t k = 1; k < modes.size(); ++k) {
    if (modes[k].l == modes[k - 1].l && modes[k].m == modes[k - 1].m) {
      throw ConfigError("modes", "duplicate mode " + mode_tag(modes[k].l, modes[k].m));
    }
  }

  const auto count = static_cast<std::ptrdiff_t>(modes.size());
  std::vector<Trajectory> results(modes.size());
  std::vector<std::string> failures(modes.size());
  std::vector<int> failure_kind(modes.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto& mc = modes[static_cast<std::size_t>(j)];
    try {
      const PotentialTable pot =
          build_potential_table(ModeSpec::from_degree(mc.l, mc.m).lambda, grid, params);
      EvolutionProblem problem;
      problem.grid = &grid;
      problem.potential = &pot;
      problem.initial = make_profile(mc.profile.value_or(c.initial_data), grid);
      if (c.source) problem.source = *c.source;
      results[static_cast<std::size_t>(j)] = evolve(problem, opts);
    } catch (const NumericalError& e) {
      failure_kind[static_cast<std::size_t>(j)] = kNumericalError;
      failures[static_cast<std::size_t>(j)] = e.what();
    } catch (const std::exception& e) {
      failure_kind[static_cast<std::size_t>(j)] = kUsageError;
      failures[static_cast<std::size_t>(j)] = e.what();
    }
  }
  for (std::size_t j = 0; j < modes.size(); ++j) {
    if (failure_kind[j] != 0) {
      err_of(ctx) << "mode " << mode_tag(modes[j].l, modes[j].m) << ": " << failures[j] << '\n';
      return failure_kind[j];
    }
  }

  std::vector<ModeSeries> series;
  json drift = json::object();
  for (std::size_t j = 0; j < modes.size(); ++j) {
    write_mode_outputs(ctx.out_dir, modes[j].l, modes[j].m, results[j], grid);
    series.push_back({modes[j].l, modes[j].m, results[j].energy});
    drift[mode_tag(modes[j].l, modes[j].m)] =
        discrete_drift(results[j], modes[j].profile.value_or(c.initial_data), grid);
  }
  io::write_energy_csv(ctx.out_dir / "energy_total.csv", total_series(series));
  json report = decay_report(series, c.analysis, "evolve-linear");
  report["discrete_energy"] = drift;
  report["assembled_energy"] = assembled_energy(modes, results, grid, params);
  report["dt"] = results.front().dt;
  report["steps"] = results.front().steps;
  io::write_json(ctx.out_dir / "decay_report.json", report);
  out_of(ctx) << "evolved " << modes.size() << " mode(s) to t=" << io::format_number(c.t_final)
              << '\n';
  return kOk;
}

int cmd_evolve_semilinear(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  if (!c.semilinear) throw ConfigError("semilinear", "this command needs a semilinear block");
  ProfileConfig profile = c.initial_data;
  if (!c.modes.empty()) {
    if (c.modes.size() != 1 || c.modes[0].l != 0 || c.modes[0].m != 0) {
      throw ConfigError("modes", "semilinear runs are spherically symmetric: modes must be {l: 0}");
    }
    if (c.modes[0].profile) profile = *c.modes[0].profile;
  }
  const SchwarzschildParams params(c.mass);
  const TortoiseGrid grid = build_grid(c.grid.x_min, c.grid.x_max, c.grid.n, params);
  const PotentialTable pot = build_potential_table(0.0, grid, params);

  EvolveOptions opts = evolve_options(c, params);
  opts.blowup_factor = c.semilinear->blowup_factor;
  const double eps = std::abs(profile.amplitude);
  if (eps > 0.0) opts.target_epsilon = eps;

  EvolutionProblem problem;
  problem.grid = &grid;
  problem.potential = &pot;
  problem.initial = make_profile(profile, grid);
  problem.semilinear = c.semilinear->spec;
  Trajectory traj;
  try {
    traj = evolve(problem, opts);
  } catch (const NumericalError& e) {
    err_of(ctx) << "mode l0_m0: " << e.what() << '\n';
    return kNumericalError;
  }
  write_mode_outputs(ctx.out_dir, 0, 0, traj, grid);

  double compliance = 0.0;
  for (const auto& e : traj.energy) compliance = std::max(compliance, e.target_ratio);
  json report;
  report["experiment"] = "evolve-semilinear";
  report["status"] = to_string(traj.status);
  report["blowup_time"] = traj.blowup_time ? json(*traj.blowup_time) : json(nullptr);
  report["probe_x"] = grid.x(grid.nearest_index(*opts.probe_x));
  report["fit"] = fit_json(probe_phi_series(traj.probe), c.analysis.fit_window);
  report["compliance"] = {{"max_ratio", compliance}, {"epsilon", eps}};
  report["halftimes"] = json::object();
  report["p"] = c.semilinear->spec.p;
  report["kappa"] = c.semilinear->spec.kappa;
  io::write_json(ctx.out_dir / "semilinear_report.json", report);
  out_of(ctx) << "status " << to_string(traj.status) << '\n';
  return kOk;
}

int cmd_convergence(const CommandContext& ctx) {
  if (!ctx.config.convergence) throw ConfigError("convergence", "this command needs a convergence block");
  const ConvergenceConfig& cc = *ctx.config.convergence;
  const ConvergenceStudy study = run_convergence(cc.fixture, cc.resolutions);
  json doc;
  doc["experiment"] = "convergence";
  doc["resolutions"] = study.resolutions;
  doc["dx"] = study.dx;
  doc["errors"] = study.errors;
  doc["orders"] = {{"coarse", study.order.coarse}, {"fine", study.order.fine}};
  doc["order"] = study.order.order();
  io::write_json(ctx.out_dir / "convergence.json", doc);
  out_of(ctx) << "order " << io::format_number(study.order.order()) << '\n';
  return kOk;
}

int cmd_decay_report(const CommandContext& ctx) {
  const std::regex pattern(R"(energy_l(\d+)_m(-?\d+)\.csv)");
  std::map<std::pair<int, int>, std::filesystem::path> files;
  if (std::filesystem::is_directory(ctx.out_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(ctx.out_dir)) {
      std::smatch mt;
      const std::string name = entry.path().filename().string();
      if (std::regex_match(name, mt, pattern)) {
        files[{std::stoi(mt[1]), std::stoi(mt[2])}] = entry.path();
      }
    }
  }
  if (files.empty()) {
    throw ConfigError("--out", "no energy_l*_m*.csv files in " + ctx.out_dir.string());
  }
  std::vector<ModeSeries> series;
  for (const auto& [lm, path] : files) series.push_back({lm.first, lm.second, io::read_energy_csv(path)});
  io::write_json(ctx.out_dir / "decay_report.json",
                 decay_report(series, ctx.config.analysis, "decay-report"));
  out_of(ctx) << "reported " << series.size() << " mode(s)\n";
  return kOk;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-potential",  "critical-curve",
                                                 "evolve-linear",     "evolve-semilinear",
                                                 "convergence",       "decay-report"};
  return names;
}

int run_command(const std::string& name, const CommandContext& ctx) {
  try {
    if (name == "verify-potential") return cmd_verify_potential(ctx);
    if (name == "critical-curve") return cmd_critical_curve(ctx);
    if (name == "evolve-linear") return cmd_evolve_linear(ctx);
    if (name == "evolve-semilinear") return cmd_evolve_semilinear(ctx);
    if (name == "convergence") return cmd_convergence(ctx);
    if (name == "decay-report") return cmd_decay_report(ctx);
    err_of(ctx) << "unknown command: " << name << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err_of(ctx) << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalError& e) {
    err_of(ctx) << "numerical failure at step " << e.step() << ": " << e.what() << '\n';
    return kNumericalError;
  } catch (const DomainError& e) {
    err_of(ctx) << "invalid input: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::filesystem::filesystem_error& e) {
    err_of(ctx) << "i/o error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::runtime_error& e) {
    err_of(ctx) << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace rwlab::cli
