#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "rwlab/analysis.hpp"
#include "rwlab/errors.hpp"

using namespace rwlab;

namespace {

std::vector<TimeValue> series(double t0, double t1, std::size_t n, const std::function<double(double)>& v) {
  std::vector<TimeValue> s;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 * std::pow(t1 / t0, double(k) / double(n - 1));
    s.push_back({t, v(t)});
  }
  return s;
}

}  // namespace

TEST_CASE("power-law fits") {
  const auto exact = series(10.0, 1000.0, 50, [](double t) { return 1.0 / (t * t); });
  const DecayFit f = fit_power_law(exact, {10.0, 1000.0});
  CHECK(f.exponent == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.amplitude == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.residual_rms < 1e-12);
  CHECK(f.points == 50);

  const auto flat = series(10.0, 1000.0, 20, [](double) { return 3.0; });
  CHECK(fit_power_law(flat, {10.0, 1000.0}).exponent == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise;
  const auto noisy = series(10.0, 1000.0, 200, [&](double t) { return 5.0 * std::pow(t, -1.5) * (1 + 0.01 * noise(rng)); });
  CHECK(fit_power_law(noisy, {10.0, 1000.0}).exponent == doctest::Approx(-1.5).epsilon(0.05 / 1.5));
}

TEST_CASE("fit invariances") {
  const auto base = series(5.0, 800.0, 60, [](double t) { return std::pow(t, -1.3) * (1.0 + 0.2 * std::sin(t)); });
  const DecayFit f0 = fit_power_law(base, {5.0, 800.0});
  auto scaled = base;
  for (auto& s : scaled) s.v *= 17.0;
  const DecayFit f1 = fit_power_law(scaled, {5.0, 800.0});
  CHECK(f1.exponent == doctest::Approx(f0.exponent).epsilon(1e-12));
  CHECK(f1.amplitude == doctest::Approx(17.0 * f0.amplitude).epsilon(1e-12));
  auto dilated = base;
  for (auto& s : dilated) s.t *= 3.0;
  CHECK(fit_power_law(dilated, {15.0, 2400.0}).exponent == doctest::Approx(f0.exponent).epsilon(1e-12));
}

TEST_CASE("fit preconditions") {
  const auto ok = series(10.0, 1000.0, 30, [](double t) { return 1.0 / t; });
  CHECK_THROWS_AS(fit_power_law(ok, {10.0, 50.0}), DomainError);
  const auto few = series(10.0, 1000.0, 7, [](double t) { return 1.0 / t; });
  CHECK_THROWS_AS(fit_power_law(few, {10.0, 1000.0}), DomainError);
  auto neg = ok;
  neg[5].v = -1.0;
  CHECK_THROWS_AS(fit_power_law(neg, {10.0, 1000.0}), DomainError);
  auto floored = ok;
  floored[3].v = 0.0;
  floored[4].v = 1e-40;
  CHECK(fit_power_law(floored, {10.0, 1000.0}).points == 28);
  CHECK_THROWS_AS(fit_power_law(ok, {100.0, 10.0}), DomainError);
}

TEST_CASE("convergence orders") {
  const auto c = convergence_order(4.0, 1.0, 0.25);
  CHECK(c.coarse == doctest::Approx(2.0));
  CHECK(c.fine == doctest::Approx(2.0));
  CHECK(c.order() == doctest::Approx(2.0));
  CHECK(convergence_order(1.0, 1.0, 1.0).order() == 0.0);
  CHECK_THROWS_AS(convergence_order(1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("trapping half-time") {
  std::vector<TimeValue> e;
  for (int k = 0; k <= 400; ++k) e.push_back({0.01 * k, std::exp(-0.01 * k)});
  CHECK(trapping_halftime(e, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-4));
  std::vector<TimeValue> up;
  for (int k = 0; k < 10; ++k) up.push_back({double(k), 1.0 + k});
  CHECK(std::isinf(trapping_halftime(up, 10.0)));
  double prev = 0.0;
  for (double f : {1.5, 2.0, 10.0, 50.0}) {
    const double t = trapping_halftime(e, f);
    CHECK(t >= prev);
    prev = t;
  }
  CHECK_THROWS_AS(trapping_halftime(std::vector<TimeValue>{}, 10.0), DomainError);
  CHECK_THROWS_AS(trapping_halftime(e, 1.0), DomainError);
}

TEST_CASE("envelope compliance") {
  std::vector<Snapshot> snaps(2);
  for (auto& s : snaps) {
    s.psi.assign(5, 0.0);
    s.dpsi_dt.assign(5, 0.0);
  }
  snaps[1].t = 1.0;
  const EnvelopeFn env = [](double t, std::size_t i) { return 1.0 + t + i; };
  CHECK(envelope_compliance(snaps, env) == 0.0);
  for (std::size_t i = 0; i < 5; ++i) {
    snaps[0].psi[i] = env(0.0, i);
    snaps[1].psi[i] = -env(1.0, i);
  }
  CHECK(envelope_compliance(snaps, env) == doctest::Approx(1.0));
  const FieldFn half = [](double psi, std::size_t) { return 0.5 * psi; };
  CHECK(envelope_compliance(snaps, env, half) == doctest::Approx(0.5));
  snaps[0].psi[2] = 1e-15 * 0.0 + 1e-16;
  CHECK(envelope_compliance(snaps, env) == doctest::Approx(1.0));
}

TEST_CASE("series extraction") {
  std::vector<EnergyBreakdown> e(3);
  for (int k = 0; k < 3; ++k) {
    e[k].t = k;
    e[k].e_local = 10.0 - k;
  }
  const auto s = local_energy_series(e);
  REQUIRE(s.size() == 3);
  CHECK(s[2].t == 2.0);
  CHECK(s[2].v == 8.0);
  const std::vector<ProbeSample> p{{0.0, -2.0, -0.5}, {1.0, 1.0, 0.25}};
  const auto ps = probe_phi_series(p);
  CHECK(ps[0].v == 0.5);
  CHECK(ps[1].v == 0.25);
}
