#include "rwlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rwlab/errors.hpp"
#include "rwlab/kernels.hpp"

namespace rwlab {

namespace {

constexpr double kFieldFloor = 1e-14;

void check_field(const FieldView& field, const TortoiseGrid& grid) {
  if (field.psi.size() != grid.size() || field.dpsi_dt.size() != grid.size()) {
    throw DomainError("functional: field does not match the grid");
  }
}

void check_potential(const PotentialTable& potential, const TortoiseGrid& grid) {
  if (potential.size() != grid.size()) throw DomainError("functional: potential does not match grid");
}

// Fills out[i] = op(i, L psi, Lbar psi) in parallel.
template <class Op>
std::vector<double> integrand(const FieldView& field, const TortoiseGrid& grid, Op op) {
  const std::size_t n = grid.size();
  std::vector<double> dpsi_dx(n);
  gradient(field.psi, grid.dx(), dpsi_dx);
  std::vector<double> out(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (count > 2048)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double lpsi = field.dpsi_dt[i] + dpsi_dx[i];
    const double lbar = field.dpsi_dt[i] - dpsi_dx[i];
    out[i] = op(i, lpsi, lbar);
  }
  return out;
}

std::vector<double> basic_density(const FieldView& field, const PotentialTable& potential,
                                  const TortoiseGrid& grid) {
  const auto q = potential.q();
  const auto psi = field.psi;
  return integrand(field, grid, [&](std::size_t i, double l, double lb) {
    return l * l + lb * lb + q[i] * psi[i] * psi[i];
  });
}

}  // namespace

void gradient(std::span<const double> psi, double dx, std::span<double> out) {
  const std::size_t n = psi.size();
  if (n < 2) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double inv2 = 0.5 / dx;
  out[0] = (psi[1] - psi[0]) / dx;
  out[n - 1] = (psi[n - 1] - psi[n - 2]) / dx;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (psi[i + 1] - psi[i - 1]) * inv2;
}

double basic_energy(const FieldView& field, const PotentialTable& potential,
                    const TortoiseGrid& grid) {
  check_field(field, grid);
  check_potential(potential, grid);
  return kernels::omp::trapezoid(basic_density(field, potential, grid), grid.dx());
}

MorawetzTerms morawetz_energy(const FieldView& field, const PotentialTable& potential,
                              const TortoiseGrid& grid) {
  check_field(field, grid);
  check_potential(potential, grid);
  const auto q = potential.q();
  const auto x = grid.x();
  const double t = field.t;
  const auto psi = field.psi;
  const std::size_t n = grid.size();
  std::vector<double> flux_ubar(n);
  std::vector<double> flux_u(n);
  const auto pot = integrand(field, grid, [&](std::size_t i, double l, double lb) {
    const double ubar = t + x[i];
    const double u = t - x[i];
    flux_ubar[i] = (1.0 + ubar * ubar) * l * l;
    flux_u[i] = (1.0 + u * u) * lb * lb;
    return (1.0 + ubar * ubar + u * u) * q[i] * psi[i] * psi[i];
  });
  MorawetzTerms terms;
  terms.ubar_flux = kernels::omp::trapezoid(flux_ubar, grid.dx());
  terms.u_flux = kernels::omp::trapezoid(flux_u, grid.dx());
  terms.potential_term = kernels::omp::trapezoid(pot, grid.dx());
  return terms;
}

double k0_density(const FieldView& field, const PotentialTable& potential,
                  const TortoiseGrid& grid, std::size_t i) {
  check_field(field, grid);
  check_potential(potential, grid);
  if (i >= grid.size()) throw DomainError("k0_density: node index outside grid");
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const auto psi = field.psi;
  double dpsi_dx;
  if (i == 0) {
    dpsi_dx = (psi[1] - psi[0]) / dx;
  } else if (i + 1 == n) {
    dpsi_dx = (psi[n - 1] - psi[n - 2]) / dx;
  } else {
    dpsi_dx = (psi[i + 1] - psi[i - 1]) * (0.5 / dx);
  }
  const double l = field.dpsi_dt[i] + dpsi_dx;
  const double lb = field.dpsi_dt[i] - dpsi_dx;
  const double ubar = field.t + grid.x(i);
  const double u = field.t - grid.x(i);
  return 0.25 * (ubar * ubar * l * l + u * u * lb * lb +
                 (ubar * ubar + u * u) * potential.q()[i] * psi[i] * psi[i]);
}

double local_energy(const FieldView& field, const PotentialTable& potential,
                    const TortoiseGrid& grid, double radius, double center) {
  check_field(field, grid);
  check_potential(potential, grid);
  if (!(radius > 0.0)) throw DomainError("local_energy: window radius must be positive");
  const double lo_x = std::max(center - radius, grid.x_min());
  const double hi_x = std::min(center + radius, grid.x_max());
  if (!(lo_x < hi_x)) throw DomainError("local_energy: window does not intersect the grid");
  auto lo = static_cast<std::size_t>(std::ceil((lo_x - grid.x_min()) / grid.dx()));
  auto hi = static_cast<std::size_t>(std::floor((hi_x - grid.x_min()) / grid.dx()));
  hi = std::min(hi, grid.size() - 1);
  // guard against round-off at the window edges
  while (lo > 0 && std::abs(grid.x(lo - 1) - center) <= radius) --lo;
  while (lo < grid.size() && std::abs(grid.x(lo) - center) > radius) ++lo;
  while (hi + 1 < grid.size() && std::abs(grid.x(hi + 1) - center) <= radius) ++hi;
  while (hi > lo && std::abs(grid.x(hi) - center) > radius) --hi;
  if (lo >= grid.size() || hi <= lo) {
    throw DomainError("local_energy: window holds fewer than two grid nodes");
  }
  return kernels::trapezoid_range(basic_density(field, potential, grid), grid.dx(), lo, hi);
}

double local_energy(const FieldView& field, const PotentialTable& potential,
                    const TortoiseGrid& grid, double radius) {
  const SchwarzschildParams params(grid.mass());
  return local_energy(field, potential, grid, radius, params.photon_sphere_tortoise());
}

double trapping_integral(const FieldView& field, const PotentialTable& potential,
                         const TortoiseGrid& grid) {
  check_field(field, grid);
  check_potential(potential, grid);
  const std::size_t n = grid.size();
  const auto q = potential.q();
  const auto dq = potential.dq();
  const auto x = grid.x();
  const auto psi = field.psi;
  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x[i] - potential.x0();
    dens[i] = (y * dq[i] + 2.0 * q[i]) * psi[i] * psi[i];
  }
  return kernels::omp::trapezoid(dens, grid.dx());
}

double discrete_energy(std::span<const double> curr, std::span<const double> next,
                       const PotentialTable& potential, const TortoiseGrid& grid, double dt) {
  const std::size_t n = grid.size();
  if (curr.size() != n || next.size() != n) throw DomainError("discrete_energy: size mismatch");
  check_potential(potential, grid);
  const double dx = grid.dx();
  const auto q = potential.q();
  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double vt = (next[i] - curr[i]) / dt;
    double grad = 0.0;
    if (i + 1 < n) grad = (next[i + 1] - next[i]) * (curr[i + 1] - curr[i]) / (dx * dx);
    dens[i] = vt * vt + grad + q[i] * next[i] * curr[i];
  }
  double acc = 0.0;
  for (double d : dens) acc += d;
  return acc * dx;
}

double poincare_ratio(const FieldView& field, const TortoiseGrid& grid) {
  check_field(field, grid);
  const auto x = grid.x();
  const auto r = grid.r();
  const auto f = grid.f();
  const auto psi = field.psi;
  const double t = field.t;
  const std::size_t n = grid.size();
  std::vector<double> num(n);
  for (std::size_t i = 0; i < n; ++i) num[i] = psi[i] * psi[i];
  const auto den = integrand(field, grid, [&](std::size_t i, double l, double lb) {
    const double ubar = t + x[i];
    const double u = t - x[i];
    return ubar * ubar * l * l + u * u * lb * lb +
           (1.0 + ubar * ubar + u * u) * f[i] * psi[i] * psi[i] / (r[i] * r[i] * r[i]);
  });
  const double top = kernels::omp::trapezoid(num, grid.dx());
  const double bottom = kernels::omp::trapezoid(den, grid.dx());
  if (top == 0.0) return 0.0;
  if (bottom == 0.0) return std::numeric_limits<double>::infinity();
  return top / bottom;
}

double multiplier_weight(double x, double k) {
  if (!(k > 1.0)) throw DomainError("multiplier_weight: k must exceed 1");
  if (x == 0.0) return 0.0;
  const double mag = (1.0 - std::pow(1.0 + std::abs(x), 1.0 - k)) / (k - 1.0);
  return x > 0.0 ? mag : -mag;
}

double sobolev_envelope(double t, double x, const RadialPoint& p) noexcept {
  const double d = std::abs(t - std::abs(x));
  if (d == 0.0) return 1.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double branch2 = p.f > 0.0 ? std::sqrt(p.r) * std::pow(p.f, -0.25) / d : inf;
  const double branch3 = 1.0 / std::sqrt(d);
  return std::min({1.0, branch2, branch3});
}

double sobolev_envelope(double t, double x, const SchwarzschildParams& params) {
  return sobolev_envelope(t, x, radial_point(x, params));
}

double pointwise_target(double t, double x, double r, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("pointwise_target: epsilon must be positive");
  const double d = std::abs(t - std::abs(x));
  const double decay = d > 1.0 ? 1.0 / std::sqrt(d) : 1.0;
  return epsilon * decay / r;
}

double pointwise_target(double t, double x, const SchwarzschildParams& params, double epsilon) {
  return pointwise_target(t, x, radius_from_tortoise(x, params), epsilon);
}

double sobolev_ratio(const FieldView& field, const TortoiseGrid& grid) {
  if (field.psi.size() != grid.size()) throw DomainError("sobolev_ratio: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = std::abs(field.psi[i]);
    if (v < kFieldFloor) continue;
    const RadialPoint p{grid.r()[i], grid.r_minus_2m()[i], grid.f()[i]};
    worst = std::max(worst, v / sobolev_envelope(field.t, grid.x(i), p));
  }
  return worst;
}

double target_ratio(const FieldView& field, const TortoiseGrid& grid, double epsilon) {
  if (field.psi.size() != grid.size()) throw DomainError("target_ratio: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r()[i];
    const double v = std::abs(field.psi[i]) / r;
    if (v < kFieldFloor) continue;
    worst = std::max(worst, v / pointwise_target(field.t, grid.x(i), r, epsilon));
  }
  return worst;
}

EnergyBreakdown measure(const FieldView& field, const PotentialTable& potential,
                        const TortoiseGrid& grid, const MeasureOptions& options) {
  EnergyBreakdown e;
  e.t = field.t;
  e.e_basic = basic_energy(field, potential, grid);
  e.morawetz_terms = morawetz_energy(field, potential, grid);
  e.e_morawetz = e.morawetz_terms.total();
  e.e_local = local_energy(field, potential, grid, options.window_radius);
  e.trapping_integral = trapping_integral(field, potential, grid);
  e.max_abs_psi = kernels::omp::max_abs(field.psi);
  e.max_abs_rphi_weighted = sobolev_ratio(field, grid);
  if (options.with_poincare) e.poincare_ratio = poincare_ratio(field, grid);
  if (options.target_epsilon) e.target_ratio = target_ratio(field, grid, *options.target_epsilon);
  return e;
}

}  // namespace rwlab
