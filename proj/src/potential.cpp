#include "rwlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rwlab/errors.hpp"

namespace rwlab {

ModeSpec ModeSpec::from_degree(int l, int m) {
  if (l < 0) throw DomainError("ModeSpec: l must be non-negative");
  if (std::abs(m) > l) throw DomainError("ModeSpec: |m| must not exceed l");
  const double ll = static_cast<double>(l);
  return {l, m, std::sqrt(ll * (ll + 1.0))};
}

namespace {

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be a finite non-negative number");
  }
}

RadialPoint point_from_radius(double r, const SchwarzschildParams& params) {
  const double two_m = params.horizon_radius();
  if (!(r > two_m)) {
    throw DomainError("potential: r = " + std::to_string(r) + " is not outside the horizon");
  }
  return {r, r - two_m, 1.0 - two_m / r};
}

}  // namespace

double potential_value(double lambda, const RadialPoint& p, double mass) noexcept {
  const double r = p.r;
  return p.f * (2.0 * mass / (r * r * r) + lambda * lambda / (r * r));
}

double potential_value(double lambda, double r, const SchwarzschildParams& params) {
  require_lambda(lambda);
  return potential_value(lambda, point_from_radius(r, params), params.mass());
}

double potential_derivative(double lambda, const RadialPoint& p, double mass) noexcept {
  const double r = p.r;
  const double l2 = lambda * lambda;
  const double bracket = l2 * r * r - 3.0 * mass * (l2 - 1.0) * r - 8.0 * mass * mass;
  const double r2 = r * r;
  return -2.0 / (r2 * r2 * r) * p.f * bracket;
}

double potential_derivative(double lambda, double r, const SchwarzschildParams& params) {
  require_lambda(lambda);
  return potential_derivative(lambda, point_from_radius(r, params), params.mass());
}

double critical_radius(double lambda, const SchwarzschildParams& params) {
  require_lambda(lambda);
  const double m = params.mass();
  const double l2 = lambda * lambda;
  const double a = l2 - 1.0;
  const double disc = std::sqrt(9.0 * a * a + 32.0 * l2);
  if (a > 0.0) {
    return (3.0 * m * a + m * disc) / (2.0 * l2);
  }
  // rationalised root: no cancellation for small lambda, equals 8M/3 at 0
  return 16.0 * m / (disc - 3.0 * a);
}

double critical_tortoise(double lambda, const SchwarzschildParams& params) {
  return tortoise_from_radius(critical_radius(lambda, params), params);
}

double second_derivative_at_critical(double lambda, const SchwarzschildParams& params) {
  const double m = params.mass();
  const double r = critical_radius(lambda, params);
  const double l2 = lambda * lambda;
  const double f = 1.0 - 2.0 * m / r;
  const double r2 = r * r;
  return -2.0 / (r2 * r2 * r) * f * f * (2.0 * l2 * r - 3.0 * m * (l2 - 1.0));
}

double angular_energy_potential(double lambda, const RadialPoint& p, double mass) noexcept {
  const double r = p.r;
  return p.f * (lambda * lambda / (r * r) + mass / (r * r * r));
}

// ---------------------------------------------------------------------------

PotentialTable PotentialTable::from_samples(double lambda, std::vector<double> q,
                                            std::vector<double> dq, double x0, double r_crit) {
  if (q.size() != dq.size()) throw DomainError("PotentialTable: q and dq differ in length");
  PotentialTable t;
  t.lambda_ = lambda;
  t.x0_ = x0;
  t.r_crit_ = r_crit;
  t.q_ = std::move(q);
  t.dq_ = std::move(dq);
  return t;
}

PotentialTable PotentialTable::zero(std::size_t n, double x0) {
  return from_samples(0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), x0, 0.0);
}

PotentialTable build_potential_table(double lambda, const TortoiseGrid& grid,
                                     const SchwarzschildParams& params) {
  require_lambda(lambda);
  if (grid.mass() != params.mass()) throw DomainError("build_potential_table: grid mass mismatch");
  PotentialTable t;
  t.lambda_ = lambda;
  t.r_crit_ = critical_radius(lambda, params);
  t.x0_ = tortoise_from_radius(t.r_crit_, params);
  const std::size_t n = grid.size();
  t.q_.resize(n);
  t.dq_.resize(n);
  const double m = params.mass();
  for (std::size_t i = 0; i < n; ++i) {
    const RadialPoint p{grid.r()[i], grid.r_minus_2m()[i], grid.f()[i]};
    t.q_[i] = potential_value(lambda, p, m);
    t.dq_[i] = potential_derivative(lambda, p, m);
  }
  return t;
}

std::vector<PotentialTable> build_family(int l_max, const TortoiseGrid& grid,
                                         const SchwarzschildParams& params) {
  if (l_max < 0) throw DomainError("build_family: l_max must be non-negative");
  std::vector<PotentialTable> family(static_cast<std::size_t>(l_max) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int l = 0; l <= l_max; ++l) {
    family[static_cast<std::size_t>(l)] =
        build_potential_table(ModeSpec::from_degree(l).lambda, grid, params);
  }
  return family;
}

// ---------------------------------------------------------------------------

bool ModeConditionReport::pass() const noexcept {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.pass; });
}

bool ConditionReport::pass() const noexcept {
  return std::all_of(modes.begin(), modes.end(),
                     [](const ModeConditionReport& m) { return m.pass(); });
}

bool ConditionReport::condition_pass(std::size_t k) const noexcept {
  return std::all_of(modes.begin(), modes.end(),
                     [k](const ModeConditionReport& m) { return m.conditions[k].pass; });
}

std::optional<std::string_view> ConditionReport::first_failure() const noexcept {
  for (std::size_t k = 0; k < kConditionCount; ++k) {
    if (!condition_pass(k)) return kConditionNames[k];
  }
  return std::nullopt;
}

namespace {

void validate(std::span<const PotentialTable> family, const RepulsiveConstants& k,
              const TortoiseGrid& grid) {
  if (!(k.c > 0.0)) throw DomainError("verify_conditions: C must be positive");
  if (!(k.b1 > 0.0) || !(k.b1 < k.b2)) throw DomainError("verify_conditions: need 0 < b1 < b2");
  if (!(k.b2 < (grid.x_max() - grid.x_min()) / 4.0)) {
    throw DomainError("verify_conditions: b2 must be below a quarter of the grid width");
  }
  for (const auto& t : family) {
    if (t.size() != grid.size()) throw DomainError("verify_conditions: table does not match grid");
  }
}

inline double sign(double y) noexcept { return (y > 0.0) - (y < 0.0); }

// Margins (rhs - lhs) of the six conditions at one node; NaN marks a node
// outside the region where that condition applies.
std::array<double, kConditionCount> node_margins(double y, double q, double dq, double lambda,
                                                 const RepulsiveConstants& k) noexcept {
  constexpr double skip = std::numeric_limits<double>::quiet_NaN();
  const double ay = std::abs(y);
  const double trap = y * dq + 2.0 * q;
  const double one_l2 = 1.0 + lambda * lambda;
  std::array<double, kConditionCount> m{};
  m[0] = q;
  m[1] = -y * dq;
  m[2] = ay > k.b1 ? -k.c * sign(y) * dq - trap : skip;
  m[3] = ay > k.b2 ? k.c * q / ay - trap : skip;
  m[4] = ay <= 2.0 * k.b1 ? -k.c * y * dq - one_l2 * y * y : skip;
  m[5] = ay <= 2.0 * k.b1 ? std::min(q - 1.0 / k.c, k.c * one_l2 - q) : skip;
  return m;
}

ModeConditionReport verify_mode(const PotentialTable& t, const RepulsiveConstants& k,
                                const TortoiseGrid& grid) {
  ModeConditionReport rep;
  rep.lambda = t.lambda();
  const auto x = grid.x();
  const auto q = t.q();
  const auto dq = t.dq();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = x[i] - t.x0();
    const auto margins = node_margins(y, q[i], dq[i], t.lambda(), k);
    for (std::size_t c = 0; c < kConditionCount; ++c) {
      const double mg = margins[c];
      if (std::isnan(mg)) continue;
      auto& res = rep.conditions[c];
      if (!res.checked || mg < res.worst_margin) {
        res.worst_margin = mg;
        res.worst_location = y;
      }
      res.checked = true;
      if (!(mg >= 0.0)) res.pass = false;
    }
  }
  return rep;
}

bool mode_holds(const PotentialTable& t, const RepulsiveConstants& k, const TortoiseGrid& grid) {
  const auto x = grid.x();
  const auto q = t.q();
  const auto dq = t.dq();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto margins = node_margins(x[i] - t.x0(), q[i], dq[i], t.lambda(), k);
    for (double mg : margins) {
      if (mg < 0.0) return false;  // NaN compares false: region not applicable
    }
  }
  return true;
}

}  // namespace

ConditionReport verify_conditions(std::span<const PotentialTable> family,
                                  const RepulsiveConstants& constants, const TortoiseGrid& grid) {
  validate(family, constants, grid);
  ConditionReport report;
  report.constants = constants;
  report.modes.resize(family.size());
  const auto count = static_cast<std::ptrdiff_t>(family.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    report.modes[static_cast<std::size_t>(j)] =
        verify_mode(family[static_cast<std::size_t>(j)], constants, grid);
  }
  return report;
}

bool conditions_hold(std::span<const PotentialTable> family, const RepulsiveConstants& constants,
                     const TortoiseGrid& grid) {
  validate(family, constants, grid);
  bool ok = true;
  const auto count = static_cast<std::ptrdiff_t>(family.size());
#pragma omp parallel for schedule(dynamic) reduction(&& : ok)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    ok = ok && mode_holds(family[static_cast<std::size_t>(j)], constants, grid);
  }
  return ok;
}

std::vector<double> ConstantSearchGrid::c_values() const {
  if (!(c_min > 0.0) || !(c_max >= c_min) || !(c_factor > 1.0)) {
    throw DomainError("ConstantSearchGrid: need 0 < c_min <= c_max and factor > 1");
  }
  std::vector<double> out;
  for (double c = c_min; c <= c_max * (1.0 + 1e-12); c *= c_factor) out.push_back(c);
  return out;
}

std::optional<RepulsiveConstants> search_constants(std::span<const PotentialTable> family,
                                                   const TortoiseGrid& grid,
                                                   const ConstantSearchGrid& candidates) {
  if (family.empty()) throw DomainError("search_constants: empty family");
  const double b_limit = (grid.x_max() - grid.x_min()) / 4.0;
  for (double c : candidates.c_values()) {
    for (double b1 : candidates.b1) {
      for (double b2 : candidates.b2) {
        if (!(b1 > 0.0 && b1 < b2 && b2 < b_limit)) continue;
        const RepulsiveConstants k{c, b1, b2};
        if (conditions_hold(family, k, grid)) return k;
      }
    }
  }
  return std::nullopt;
}

double trapping_term(double lambda, double y, const SchwarzschildParams& params) {
  require_lambda(lambda);
  if (!std::isfinite(y)) throw DomainError("trapping_term: y must be finite");
  const double x = critical_tortoise(lambda, params) + y;
  const RadialPoint p = radial_point(x, params);
  const double m = params.mass();
  return y * potential_derivative(lambda, p, m) + 2.0 * potential_value(lambda, p, m);
}

double trapping_term(double lambda, double y, const SchwarzschildParams& params,
                     const TortoiseGrid& grid) {
  const double x = critical_tortoise(lambda, params) + y;
  if (x < grid.x_min() || x > grid.x_max()) {
    throw DomainError("trapping_term: x0(lambda) + y lies outside the grid");
  }
  return trapping_term(lambda, y, params);
}

}  // namespace rwlab
