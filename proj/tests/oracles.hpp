#pragma once
// Independent reference computations for the unit tests. Nothing in here
// calls into the library.

#include <cmath>
#include <functional>

namespace oracle {

// Root of a continuous g on [lo, hi] with g(lo) and g(hi) of opposite sign.
inline double bisect(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
  double glo = g(lo);
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& g, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

// r* as a function of s = r - 2M, written out directly.
inline double tortoise(double s, double m) { return 2.0 * m + s + 2.0 * m * std::log(s); }

// Regge-Wheeler potential written out in r.
inline double q_of_r(double lambda, double r, double m) {
  const double f = 1.0 - 2.0 * m / r;
  return f * (2.0 * m / (r * r * r) + lambda * lambda / (r * r));
}

// r(r*) by bisection in log(s).
inline double radius(double x, double m) {
  const double ls = bisect([&](double u) { return tortoise(std::exp(u), m) - x; }, -700.0, 30.0, 400);
  return 2.0 * m + std::exp(ls);
}

}  // namespace oracle
