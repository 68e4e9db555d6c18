#include "rwlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rwlab/errors.hpp"

namespace rwlab {

SchwarzschildParams::SchwarzschildParams(double mass) : mass_(mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("mass must be positive and finite");
  }
}

double SchwarzschildParams::photon_sphere_tortoise() const noexcept {
  // r = 3M, r - 2M = M
  return 3.0 * mass_ + 2.0 * mass_ * std::log(mass_);
}

double tortoise_from_radius(double r, const SchwarzschildParams& params) {
  const double two_m = params.horizon_radius();
  if (!(r > two_m)) {
    throw DomainError("tortoise_from_radius: r = " + std::to_string(r) +
                      " is not outside the horizon");
  }
  return r + two_m * std::log(r - two_m);
}

double tortoise_from_horizon_offset(double s, const SchwarzschildParams& params) {
  if (!(s > 0.0)) {
    throw DomainError("tortoise_from_horizon_offset: offset must be positive");
  }
  const double two_m = params.horizon_radius();
  return two_m + s + two_m * std::log(s);
}

namespace {

// Solves g(s) = s + 2M ln s - (x - 2M) = 0 for s = r - 2M > 0.
// g is strictly increasing with g'(s) = r/(r - 2M); Newton steps that leave
// the bracket fall back to a bisection in log s.
double solve_horizon_offset(double x, double mass) {
  const double two_m = 2.0 * mass;
  const double c = x - two_m;
  auto residual = [&](double s) { return s + two_m * std::log(s) - c; };

  double log_lo = (c - std::max(c, 0.0) - 1.0) / two_m;
  double s_lo = std::exp(log_lo);
  double s_hi = std::abs(c) + 1.0;
  if (!(s_lo > 0.0)) {
    throw DomainError("radius_from_tortoise: x = " + std::to_string(x) +
                      " is too close to the horizon to represent r - 2M");
  }

  double s;
  if (x > 2.0 * two_m) {
    s = x - two_m * std::log(std::max(x, 1.0));
  } else {
    s = std::exp((x - two_m) / two_m);
  }
  if (!(s > s_lo && s < s_hi)) s = std::sqrt(s_lo * s_hi);

  constexpr int kMaxIter = 200;
  for (int it = 0; it < kMaxIter; ++it) {
    const double g = residual(s);
    if (g == 0.0) return s;
    if (g < 0.0) {
      s_lo = s;
    } else {
      s_hi = s;
    }
    const double slope = 1.0 + two_m / s;
    double next = s - g / slope;
    if (!(next > s_lo && next < s_hi)) {
      // geometric midpoint keeps the bisection efficient across decades
      next = (s_hi / s_lo > 4.0) ? std::sqrt(s_lo * s_hi) : 0.5 * (s_lo + s_hi);
    }
    if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * next) {
      return next;
    }
    s = next;
  }
  throw NumericalError("radius_from_tortoise: no convergence for x = " + std::to_string(x));
}

}  // namespace

double horizon_offset_from_tortoise(double x, const SchwarzschildParams& params) {
  if (!std::isfinite(x)) throw DomainError("radius_from_tortoise: x must be finite");
  return solve_horizon_offset(x, params.mass());
}

double radius_from_tortoise(double x, const SchwarzschildParams& params) {
  return params.horizon_radius() + horizon_offset_from_tortoise(x, params);
}

RadialPoint radial_point(double x, const SchwarzschildParams& params) {
  const double s = horizon_offset_from_tortoise(x, params);
  const double r = params.horizon_radius() + s;
  return {r, s, s / r};
}

std::size_t TortoiseGrid::nearest_index(double xq) const noexcept {
  if (x_.empty()) return 0;
  const double pos = std::round((xq - x_min_) / dx_);
  if (pos <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(pos);
  return std::min(i, x_.size() - 1);
}

bool TortoiseGrid::same_layout(const TortoiseGrid& other) const noexcept {
  return x_.size() == other.x_.size() && x_min_ == other.x_min_ && x_max_ == other.x_max_ &&
         mass_ == other.mass_;
}

TortoiseGrid build_grid(double x_min, double x_max, std::size_t n,
                        const SchwarzschildParams& params) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw DomainError("build_grid: require finite x_min < x_max");
  }
  if (n < 3) throw DomainError("build_grid: need at least 3 nodes");

  TortoiseGrid grid;
  grid.x_min_ = x_min;
  grid.x_max_ = x_max;
  grid.mass_ = params.mass();
  grid.dx_ = (x_max - x_min) / static_cast<double>(n - 1);
  grid.x_.resize(n);
  grid.r_.resize(n);
  grid.s_.resize(n);
  grid.f_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (i + 1 == n) ? x_max : x_min + static_cast<double>(i) * grid.dx_;
    const RadialPoint p = radial_point(x, params);
    grid.x_[i] = x;
    grid.r_[i] = p.r;
    grid.s_[i] = p.r_minus_2m;
    grid.f_[i] = p.f;
  }
  return grid;
}

}  // namespace rwlab
