#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rwlab/potential.hpp"

namespace rwlab {

/// Gauss-Legendre rule on mu = cos(theta) in [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

GaussLegendre gauss_legendre(std::size_t n);

/// P_l(mu) by the three-term recurrence.
double legendre(int l, double mu);

/// Orthonormal axisymmetric harmonic sqrt((2l+1)/(4 pi)) P_l(cos theta),
/// evaluated at mu = cos(theta).
double ylm0(int l, double mu);

/// Field samples f(x_i, theta_j) with theta_j on a Gauss-Legendre rule.
struct AngularSamples {
  std::size_t n_x = 0;
  GaussLegendre rule;
  std::vector<double> values;  ///< row-major: values[i * rule.size() + j]

  double& at(std::size_t i, std::size_t j) { return values[i * rule.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * rule.size() + j]; }
};

/// Radial profiles of the (l, m = 0) coefficients, l = 0..l_max.
class ModeCoefficients {
 public:
  ModeCoefficients(int l_max, std::size_t n_x);

  int l_max() const noexcept { return static_cast<int>(profiles_.size()) - 1; }
  std::size_t n_x() const noexcept { return n_x_; }

  std::span<double> profile(int l) { return profiles_.at(static_cast<std::size_t>(l)); }
  std::span<const double> profile(int l) const { return profiles_.at(static_cast<std::size_t>(l)); }

 private:
  std::size_t n_x_;
  std::vector<std::vector<double>> profiles_;
};

/// Coefficient of Y_l0 at each x_i, by quadrature. Requires at least
/// 2 l_max + 2 angular nodes.
ModeCoefficients project_axisymmetric(const AngularSamples& samples, int l_max);

/// sum_l coeff_l(x) Y_l0(theta) for every x, at mu = cos(theta).
std::vector<double> reconstruct(const ModeCoefficients& coeffs, double mu);

/// Eigenvalue (1 + lambda^2)^(s/2) of (1 - Delta_sph)^(s/2) on the harmonic.
double angular_smoothing_weight(double lambda, double s);

struct ModeEnergy {
  ModeSpec mode;
  double energy = 0.0;
};

/// Sum of per-mode energies; negative entries are rejected.
double assemble_total_energy(std::span<const ModeEnergy> per_mode);

}  // namespace rwlab
