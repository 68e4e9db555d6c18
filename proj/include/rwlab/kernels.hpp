#pragma once

// Grid-sized inner loops. Each kernel has a plain serial reference and an
// OpenMP version; the solver uses the OpenMP ones, the tests check that both
// agree, and bench/ times them against each other.
//
// Reductions in the OpenMP versions sum fixed-size blocks in parallel and
// combine the block partials in order, so results do not depend on the
// thread count.

#include <cstddef>
#include <span>

namespace rwlab::kernels {

/// Interior leapfrog update
///   next_i = 2 curr_i - prev_i + dt^2 ((curr_{i+1} - 2 curr_i + curr_{i-1})/dx^2
///                                     - q_i curr_i - h_i)
/// for 0 < i < n-1. `h` may be empty (no source). Boundary entries of `next`
/// are left untouched.
struct LeapfrogArgs {
  std::span<const double> prev;
  std::span<const double> curr;
  std::span<const double> q;
  std::span<const double> h;
  double dt;
  double dx;
};

namespace serial {
void leapfrog(const LeapfrogArgs& a, std::span<double> next);
void nonlinear_source(std::span<const double> psi, std::span<const double> f,
                      std::span<const double> r, double kappa, double p, std::span<double> h);
double trapezoid(std::span<const double> integrand, double dx);
double max_abs(std::span<const double> v);
bool all_finite(std::span<const double> v);
}  // namespace serial

namespace omp {
void leapfrog(const LeapfrogArgs& a, std::span<double> next);
void nonlinear_source(std::span<const double> psi, std::span<const double> f,
                      std::span<const double> r, double kappa, double p, std::span<double> h);
double trapezoid(std::span<const double> integrand, double dx);
double max_abs(std::span<const double> v);
bool all_finite(std::span<const double> v);
}  // namespace omp

/// Trapezoid rule restricted to nodes [lo, hi] (inclusive), with half
/// weights at lo and hi.
double trapezoid_range(std::span<const double> integrand, double dx, std::size_t lo,
                       std::size_t hi);

}  // namespace rwlab::kernels
