#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rwlab/analysis.hpp"
#include "rwlab/geometry.hpp"

namespace rwlab {

/// psi(t, x) = sin(x - t) c(x) with c(x) = exp(-(x - center)^2 / (2 width^2)),
/// driven by H = -psi_tt + psi_xx - Q_lambda psi evaluated in closed form.
struct ManufacturedFixture {
  double mass = 1.0;
  double lambda = 0.0;
  double x_min = -30.0;
  double x_max = 50.0;
  double center = 10.0;
  double width = 3.0;
  double t_final = 20.0;
  double courant = 0.9;

  double exact(double t, double x) const;
  double exact_dt(double t, double x) const;
  /// H at one node; q is Q_lambda there.
  double source(double t, double x, double q) const;
};

/// Max-norm error at the final time on a grid with n nodes.
double manufactured_error(const ManufacturedFixture& fixture, std::size_t n);

struct ConvergenceStudy {
  std::vector<std::size_t> resolutions;
  std::vector<double> dx;
  std::vector<double> errors;
  ConvergenceOrder order;
};

/// Three nested resolutions n, 2n-1, 4n-3 (dx, dx/2, dx/4).
ConvergenceStudy run_convergence(const ManufacturedFixture& fixture,
                                 std::span<const std::size_t> resolutions);

}  // namespace rwlab
