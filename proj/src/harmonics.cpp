#include "rwlab/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rwlab/errors.hpp"

namespace rwlab {

double legendre(int l, double mu) {
  if (l < 0) throw DomainError("legendre: negative degree");
  if (l == 0) return 1.0;
  double p0 = 1.0;
  double p1 = mu;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * mu * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double ylm0(int l, double mu) {
  return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi)) * legendre(l, mu);
}

GaussLegendre gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int deg = static_cast<int>(n);
  for (std::size_t k = 0; k < (n + 1) / 2; ++k) {
    // Tricomi initial guess, then Newton on P_n
    double mu = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.75) /
                         (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = mu;
      for (int j = 2; j <= deg; ++j) {
        const double p2 = ((2.0 * j - 1.0) * mu * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = deg == 1 ? mu : p1;
      const double pnm1 = deg == 1 ? 1.0 : p0;
      dp = deg * (mu * pn - pnm1) / (mu * mu - 1.0);
      const double step = pn / dp;
      mu -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - mu * mu) * dp * dp);
    rule.nodes[k] = -mu;
    rule.weights[k] = w;
    rule.nodes[n - 1 - k] = mu;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

ModeCoefficients::ModeCoefficients(int l_max, std::size_t n_x) : n_x_(n_x) {
  if (l_max < 0) throw DomainError("ModeCoefficients: l_max must be non-negative");
  profiles_.assign(static_cast<std::size_t>(l_max) + 1, std::vector<double>(n_x, 0.0));
}

ModeCoefficients project_axisymmetric(const AngularSamples& samples, int l_max) {
  const std::size_t n_theta = samples.rule.size();
  if (l_max < 0) throw DomainError("project_axisymmetric: l_max must be non-negative");
  if (n_theta < 2 * static_cast<std::size_t>(l_max) + 2) {
    throw DomainError("project_axisymmetric: " + std::to_string(n_theta) +
                      " angular nodes cannot resolve l_max = " + std::to_string(l_max));
  }
  if (samples.values.size() != samples.n_x * n_theta) {
    throw DomainError("project_axisymmetric: sample array has the wrong size");
  }

  // basis[l][j] = 2 pi w_j Y_l0(mu_j)
  std::vector<std::vector<double>> basis(static_cast<std::size_t>(l_max) + 1,
                                         std::vector<double>(n_theta));
  for (int l = 0; l <= l_max; ++l) {
    for (std::size_t j = 0; j < n_theta; ++j) {
      basis[l][j] = 2.0 * std::numbers::pi * samples.rule.weights[j] * ylm0(l, samples.rule.nodes[j]);
    }
  }

  ModeCoefficients coeffs(l_max, samples.n_x);
  const auto n_x = static_cast<std::ptrdiff_t>(samples.n_x);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n_x; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (int l = 0; l <= l_max; ++l) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_theta; ++j) acc += basis[l][j] * samples.at(i, j);
      coeffs.profile(l)[i] = acc;
    }
  }
  return coeffs;
}

std::vector<double> reconstruct(const ModeCoefficients& coeffs, double mu) {
  std::vector<double> out(coeffs.n_x(), 0.0);
  for (int l = 0; l <= coeffs.l_max(); ++l) {
    const double y = ylm0(l, mu);
    const auto c = coeffs.profile(l);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * y;
  }
  return out;
}

double angular_smoothing_weight(double lambda, double s) {
  if (!(lambda >= 0.0)) throw DomainError("angular_smoothing_weight: lambda must be >= 0");
  return std::pow(1.0 + lambda * lambda, 0.5 * s);
}

double assemble_total_energy(std::span<const ModeEnergy> per_mode) {
  double total = 0.0;
  for (const auto& e : per_mode) {
    if (!(e.energy >= 0.0)) {
      throw NumericalError("assemble_total_energy: negative energy in mode l = " +
                           std::to_string(e.mode.l));
    }
    total += e.energy;
  }
  return total;
}

}  // namespace rwlab
