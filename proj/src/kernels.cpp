#include "rwlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rwlab::kernels {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr std::ptrdiff_t kParallelThreshold = 2048;

inline double update(const LeapfrogArgs& a, std::size_t i, double inv_dx2, double dt2) noexcept {
  const double c = a.curr[i];
  const double lap = (a.curr[i + 1] - 2.0 * c + a.curr[i - 1]) * inv_dx2;
  const double h = a.h.empty() ? 0.0 : a.h[i];
  return 2.0 * c - a.prev[i] + dt2 * (lap - a.q[i] * c - h);
}

inline double source(double psi, double f, double r, double kappa, double p) noexcept {
  return f * kappa * std::pow(std::abs(psi), p) * psi / std::pow(r, p);
}

}  // namespace

namespace serial {

void leapfrog(const LeapfrogArgs& a, std::span<double> next) {
  const double inv_dx2 = 1.0 / (a.dx * a.dx);
  const double dt2 = a.dt * a.dt;
  for (std::size_t i = 1; i + 1 < next.size(); ++i) next[i] = update(a, i, inv_dx2, dt2);
}

void nonlinear_source(std::span<const double> psi, std::span<const double> f,
                      std::span<const double> r, double kappa, double p, std::span<double> h) {
  for (std::size_t i = 0; i < psi.size(); ++i) h[i] = source(psi[i], f[i], r[i], kappa, p);
}

double trapezoid(std::span<const double> v, double dx) {
  if (v.size() < 2) return 0.0;
  double acc = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
  return acc * dx;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace serial

namespace omp {

void leapfrog(const LeapfrogArgs& a, std::span<double> next) {
  const double inv_dx2 = 1.0 / (a.dx * a.dx);
  const double dt2 = a.dt * a.dt;
  const auto n = static_cast<std::ptrdiff_t>(next.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
    next[static_cast<std::size_t>(i)] = update(a, static_cast<std::size_t>(i), inv_dx2, dt2);
  }
}

void nonlinear_source(std::span<const double> psi, std::span<const double> f,
                      std::span<const double> r, double kappa, double p, std::span<double> h) {
  const auto n = static_cast<std::ptrdiff_t>(psi.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    h[i] = source(psi[i], f[i], r[i], kappa, p);
  }
}

double trapezoid(std::span<const double> v, double dx) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (nb > 1)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      acc += w * v[i];
    }
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total * dx;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static) reduction(max : m) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[static_cast<std::size_t>(i)]));
  return m;
}

bool all_finite(std::span<const double> v) {
  bool ok = true;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static) reduction(&& : ok) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) ok = ok && std::isfinite(v[static_cast<std::size_t>(i)]);
  return ok;
}

}  // namespace omp

double trapezoid_range(std::span<const double> v, double dx, std::size_t lo, std::size_t hi) {
  if (hi <= lo || hi >= v.size()) return 0.0;
  return omp::trapezoid(v.subspan(lo, hi - lo + 1), dx);
}

}  // namespace rwlab::kernels
