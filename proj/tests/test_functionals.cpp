#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rwlab/errors.hpp"
#include "rwlab/functionals.hpp"

using namespace rwlab;

namespace {

struct Field {
  std::vector<double> psi, dt;
  FieldView view(double t = 0.0) const { return {t, psi, dt}; }
};

Field gaussian(const TortoiseGrid& g, double center, double a) {
  Field f;
  f.psi.resize(g.size());
  f.dt.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double z = g.x(i) - center;
    f.psi[i] = std::exp(-a * z * z);
  }
  return f;
}

}  // namespace

TEST_CASE("basic energy of a static Gaussian") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-10.0, 10.0, 8001, p);
  const auto zero = PotentialTable::zero(g.size());
  const Field f = gaussian(g, 0.0, 1.0);
  const double e = basic_energy(f.view(), zero, g);
  CHECK(e == doctest::Approx(2.0 * std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-5));
  CHECK(e == doctest::Approx(2.5066283).epsilon(1e-5));

  Field z = f;
  std::fill(z.psi.begin(), z.psi.end(), 0.0);
  CHECK(basic_energy(z.view(), zero, g) == 0.0);
  CHECK(morawetz_energy(z.view(), zero, g).total() == 0.0);
  CHECK(k0_density(z.view(), zero, g, 100) == 0.0);
}

TEST_CASE("functional quadrature converges at second order") {
  const SchwarzschildParams p(1.0);
  const double exact = 2.0 * std::sqrt(std::numbers::pi / 2.0);
  double prev = 0.0;
  for (std::size_t n : {401u, 801u, 1601u}) {
    const TortoiseGrid g = build_grid(-10.0, 10.0, n, p);
    const double err = std::abs(basic_energy(gaussian(g, 0.0, 1.0).view(), PotentialTable::zero(n), g) - exact);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("Morawetz energy against a refined quadrature oracle") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-8.0, 8.0, 64001, p);
  const PotentialTable q0 = build_potential_table(0.0, g, p);
  const Field f = gaussian(g, 0.0, 1.0);
  const MorawetzTerms m = morawetz_energy(f.view(), q0, g);

  const double want = oracle::simpson(
      [](double x) {
        const double psi = std::exp(-x * x);
        const double dpsi = -2.0 * x * psi;
        const double q = oracle::q_of_r(0.0, oracle::radius(x, 1.0), 1.0);
        return (1 + x * x) * 2.0 * dpsi * dpsi + (1 + 2 * x * x) * q * psi * psi;
      },
      -8.0, 8.0, 16000);
  CHECK(m.total() == doctest::Approx(want).epsilon(1e-6));
  CHECK(m.ubar_flux >= 0.0);
  CHECK(m.u_flux >= 0.0);
  CHECK(m.potential_term >= 0.0);
  // At t = 0 the two flux weights coincide.
  CHECK(m.ubar_flux == doctest::Approx(m.u_flux).epsilon(1e-12));
}

TEST_CASE("Morawetz energy dominates the basic energy and the K0 density") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-60.0, 80.0, 2801, p);
  const PotentialTable q = build_potential_table(std::sqrt(6.0), g, p);
  Field f = gaussian(g, 10.0, 0.25);
  for (std::size_t i = 0; i < g.size(); ++i) f.dt[i] = std::sin(0.3 * g.x(i)) * f.psi[i];
  for (double t : {0.0, 5.0, 37.0}) {
    const auto v = f.view(t);
    const double e = basic_energy(v, q, g);
    const double mor = morawetz_energy(v, q, g).total();
    CHECK(mor >= e);
    std::vector<double> k0(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) k0[i] = k0_density(v, q, g, i);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += (i == 0 || i + 1 == g.size() ? 0.5 : 1.0) * k0[i];
    CHECK(4.0 * s * g.dx() <= mor);
  }
  // Density at x = 0, t = 0 where psi vanishes.
  Field odd = f;
  for (std::size_t i = 0; i < g.size(); ++i) odd.psi[i] = g.x(i) * std::exp(-g.x(i) * g.x(i));
  std::fill(odd.dt.begin(), odd.dt.end(), 0.0);
  CHECK(k0_density(odd.view(), q, g, g.nearest_index(0.0)) == doctest::Approx(0.0).scale(1e-20));
}

TEST_CASE("local energy windows") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-50.0, 50.0, 2001, p);
  const PotentialTable q = build_potential_table(1.0, g, p);
  const Field near = gaussian(g, 3.0, 1.0);
  CHECK(local_energy(near.view(), q, g, 1e3, 0.0) == doctest::Approx(basic_energy(near.view(), q, g)).epsilon(1e-14));
  const Field far = gaussian(g, 40.0, 4.0);
  CHECK(local_energy(far.view(), q, g, 20.0) < 1e-100);
  CHECK(local_energy(near.view(), q, g, 20.0) <= basic_energy(near.view(), q, g));
  CHECK_THROWS_AS(local_energy(near.view(), q, g, 0.0), DomainError);
  CHECK_THROWS_AS(local_energy(near.view(), q, g, 1.0, 500.0), DomainError);
}

TEST_CASE("trapping integral sign") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-60.0, 100.0, 16001, p);
  const double lambda = std::sqrt(6.0);
  const PotentialTable q = build_potential_table(lambda, g, p);
  const Field at_peak = gaussian(g, q.x0(), 50.0);
  double norm = 0.0;
  for (double v : at_peak.psi) norm += v * v;
  norm *= g.dx();
  const double q0 = potential_value(lambda, q.r_crit(), p);
  CHECK(trapping_integral(at_peak.view(), q, g) == doctest::Approx(2.0 * q0 * norm).epsilon(1e-2));
  CHECK(trapping_integral(gaussian(g, q.x0() + 40.0, 0.5).view(), q, g) < 0.0);
  Field z = at_peak;
  std::fill(z.psi.begin(), z.psi.end(), 0.0);
  CHECK(trapping_integral(z.view(), q, g) == 0.0);
}

TEST_CASE("multiplier weight") {
  CHECK(multiplier_weight(0.0, 2.0) == 0.0);
  CHECK(multiplier_weight(1.0, 2.0) == doctest::Approx(0.5));
  CHECK(multiplier_weight(1e12, 2.0) == doctest::Approx(1.0));
  CHECK(multiplier_weight(-3.0, 2.5) == doctest::Approx(-multiplier_weight(3.0, 2.5)));
  const double integral = oracle::simpson([](double y) { return std::pow(1 + y, -1.7); }, 0.0, 4.0, 2000);
  CHECK(multiplier_weight(4.0, 1.7) == doctest::Approx(integral).epsilon(1e-10));
  for (double x : {0.1, 10.0, 1e6}) CHECK(multiplier_weight(x, 3.0) < 0.5);
  CHECK_THROWS_AS(multiplier_weight(1.0, 1.0), DomainError);
}

TEST_CASE("Sobolev envelope and pointwise target") {
  const SchwarzschildParams p(1.0);
  CHECK(sobolev_envelope(10.0, 10.0, p) == 1.0);
  CHECK(sobolev_envelope(10.0, -10.0, p) == 1.0);
  CHECK(sobolev_envelope(14.0, 10.0, p) <= 0.5);
  // Far out at fixed t - |x| the r^(1/2) branch is large, so branch three wins.
  CHECK(sobolev_envelope(1004.0, 1000.0, p) == doctest::Approx(0.5));
  // Near the horizon f^(-1/4) grows, but deep inside the r^(1/2)/d branch can win when d is large.
  const RadialPoint rp = radial_point(-5.0, p);
  const double b2 = std::sqrt(rp.r) * std::pow(rp.f, -0.25) / 395.0;
  CHECK(sobolev_envelope(400.0, -5.0, rp) == doctest::Approx(std::min({1.0, b2, 1.0 / std::sqrt(395.0)})));

  CHECK(pointwise_target(20.0, 20.0, 7.0, 1e-3) == doctest::Approx(1e-3 / 7.0));
  CHECK(pointwise_target(120.0, 20.0, 7.0, 1e-3) == doctest::Approx(1e-3 / 70.0));
  CHECK(pointwise_target(120.0, 20.0, 7.0, 2e-3) == doctest::Approx(2.0 * pointwise_target(120.0, 20.0, 7.0, 1e-3)));
  CHECK(pointwise_target(3.0, 3.0, p, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(pointwise_target(1.0, 0.0, 3.0, 0.0), DomainError);
}

TEST_CASE("Poincare ratio is finite for compact data") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-60.0, 80.0, 2801, p);
  for (double c : {-20.0, 0.0, 10.0, 50.0}) {
    const double ratio = poincare_ratio(gaussian(g, c, 0.1).view(3.0), g);
    CHECK(std::isfinite(ratio));
    CHECK(ratio > 0.0);
  }
}

TEST_CASE("measure bundles the functionals") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-60.0, 80.0, 2801, p);
  const PotentialTable q = build_potential_table(1.0, g, p);
  const Field f = gaussian(g, 10.0, 0.25);
  MeasureOptions opt;
  opt.target_epsilon = 1.0;
  const EnergyBreakdown e = measure(f.view(2.0), q, g, opt);
  CHECK(e.t == 2.0);
  CHECK(e.e_basic == basic_energy(f.view(2.0), q, g));
  CHECK(e.e_morawetz == doctest::Approx(e.morawetz_terms.total()));
  CHECK(e.max_abs_psi == doctest::Approx(1.0));
  CHECK(e.e_local <= e.e_basic);
  CHECK(e.poincare_ratio > 0.0);
  CHECK(e.target_ratio > 0.0);
  CHECK(e.max_abs_rphi_weighted >= 1.0);
}
