#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rwlab/errors.hpp"
#include "rwlab/harmonics.hpp"

using namespace rwlab;

namespace {

constexpr double kPi = std::numbers::pi;

AngularSamples sample(std::size_t n_x, std::size_t n_theta,
                      const std::function<double(std::size_t, double)>& f) {
  AngularSamples s;
  s.n_x = n_x;
  s.rule = gauss_legendre(n_theta);
  s.values.resize(n_x * n_theta);
  for (std::size_t i = 0; i < n_x; ++i)
    for (std::size_t j = 0; j < n_theta; ++j) s.at(i, j) = f(i, s.rule.nodes[j]);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  for (std::size_t n : {1u, 2u, 5u, 12u, 40u}) {
    const GaussLegendre gl = gauss_legendre(n);
    REQUIRE(gl.size() == n);
    for (std::size_t j = 1; j < n; ++j) CHECK(gl.nodes[j] > gl.nodes[j - 1]);
    for (std::size_t deg = 0; deg < 2 * n; ++deg) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += gl.weights[j] * std::pow(gl.nodes[j], double(deg));
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1.0);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("Legendre polynomials and the orthonormal harmonics") {
  CHECK(legendre(0, 0.3) == 1.0);
  CHECK(legendre(1, 0.3) == doctest::Approx(0.3));
  CHECK(legendre(2, 0.3) == doctest::Approx(0.5 * (3 * 0.09 - 1)));
  CHECK(legendre(3, -0.7) == doctest::Approx(0.5 * (5 * -0.343 - 3 * -0.7)));
  CHECK(legendre(17, 1.0) == doctest::Approx(1.0));
  CHECK(legendre(17, -1.0) == doctest::Approx(-1.0));
  CHECK(ylm0(0, 0.2) == doctest::Approx(1.0 / std::sqrt(4 * kPi)));

  // Gram matrix against an independent theta quadrature.
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      const double g = oracle::simpson(
          [&](double th) { return 2 * kPi * std::sin(th) * ylm0(a, std::cos(th)) * ylm0(b, std::cos(th)); },
          0.0, kPi, 40000);
      CHECK(g == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("projection of simple data") {
  const std::size_t nx = 5;
  auto g = [](std::size_t i) { return 1.0 + 0.5 * i; };

  const auto one = project_axisymmetric(sample(nx, 8, [](std::size_t, double) { return 1.0; }), 3);
  for (std::size_t i = 0; i < nx; ++i) {
    CHECK(one.profile(0)[i] == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-14));
    CHECK(one.profile(0)[i] == doctest::Approx(3.5449077).epsilon(1e-7));
    for (int l = 1; l <= 3; ++l) CHECK(std::abs(one.profile(l)[i]) < 1e-13);
  }

  const auto cos_data = project_axisymmetric(sample(nx, 8, [&](std::size_t i, double mu) { return mu * g(i); }), 3);
  for (std::size_t i = 0; i < nx; ++i) {
    CHECK(cos_data.profile(1)[i] == doctest::Approx(std::sqrt(4 * kPi / 3) * g(i)).epsilon(1e-14));
    CHECK(std::abs(cos_data.profile(0)[i]) < 1e-13);
    CHECK(std::abs(cos_data.profile(2)[i]) < 1e-13);
  }
  CHECK(std::sqrt(4 * kPi / 3) == doctest::Approx(2.0466534).epsilon(1e-7));

  const auto y20 = project_axisymmetric(sample(nx, 8, [&](std::size_t i, double mu) { return ylm0(2, mu) * g(i); }), 3);
  for (std::size_t i = 0; i < nx; ++i) {
    CHECK(y20.profile(2)[i] == doctest::Approx(g(i)).epsilon(1e-13));
    for (int l : {0, 1, 3}) CHECK(std::abs(y20.profile(l)[i]) < 1e-12);
  }

  CHECK_THROWS_AS(project_axisymmetric(sample(nx, 7, [](std::size_t, double) { return 1.0; }), 3), DomainError);
}

TEST_CASE("reconstruct and project invert each other on band-limited data") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int l_max = 9;
  const std::size_t nx = 20;
  ModeCoefficients c(l_max, nx);
  for (int l = 0; l <= l_max; ++l)
    for (std::size_t i = 0; i < nx; ++i) c.profile(l)[i] = u(rng);

  const GaussLegendre rule = gauss_legendre(2 * l_max + 2);
  AngularSamples s;
  s.n_x = nx;
  s.rule = rule;
  s.values.resize(nx * rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const auto col = reconstruct(c, rule.nodes[j]);
    for (std::size_t i = 0; i < nx; ++i) s.at(i, j) = col[i];
  }
  const auto back = project_axisymmetric(s, l_max);
  double worst = 0.0;
  for (int l = 0; l <= l_max; ++l)
    for (std::size_t i = 0; i < nx; ++i) worst = std::max(worst, std::abs(back.profile(l)[i] - c.profile(l)[i]));
  CHECK(worst < 1e-12);

  // Parseval per radial node.
  for (std::size_t i = 0; i < nx; ++i) {
    double modes = 0.0;
    for (int l = 0; l <= l_max; ++l) modes += c.profile(l)[i] * c.profile(l)[i];
    double direct = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) direct += 2 * kPi * rule.weights[j] * s.at(i, j) * s.at(i, j);
    CHECK(modes == doctest::Approx(direct).epsilon(1e-12));
  }

  ModeCoefficients zero(3, 4);
  for (double v : reconstruct(zero, 0.4)) CHECK(v == 0.0);
  ModeCoefficients c0(0, 3);
  c0.profile(0)[1] = 2.0;
  CHECK(reconstruct(c0, -0.9)[1] == doctest::Approx(2.0 / std::sqrt(4 * kPi)));
}

TEST_CASE("angular smoothing weights") {
  CHECK(angular_smoothing_weight(0.0, 3.7) == 1.0);
  CHECK(angular_smoothing_weight(std::sqrt(2.0), 2.0) == doctest::Approx(3.0));
  CHECK(angular_smoothing_weight(std::sqrt(6.0), 1.0) == doctest::Approx(2.6457513).epsilon(1e-7));
  CHECK_THROWS_AS(angular_smoothing_weight(-1.0, 1.0), DomainError);
}

TEST_CASE("energy assembly") {
  const std::vector<ModeEnergy> one{{ModeSpec::from_degree(0), 1.0}};
  CHECK(assemble_total_energy(one) == 1.0);
  const std::vector<ModeEnergy> two{{ModeSpec::from_degree(0), 0.3}, {ModeSpec::from_degree(2), 0.7}};
  CHECK(assemble_total_energy(two) == doctest::Approx(1.0));
  const std::vector<ModeEnergy> bad{{ModeSpec::from_degree(1), -0.1}};
  CHECK_THROWS(assemble_total_energy(bad));
}
