#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rwlab {

/// Mass of the black hole in geometric units (G = c = 1). Everything else is
/// derived from it.
class SchwarzschildParams {
 public:
  explicit SchwarzschildParams(double mass = 1.0);

  double mass() const noexcept { return mass_; }
  double horizon_radius() const noexcept { return 2.0 * mass_; }

  /// Tortoise coordinate of the photon sphere r = 3M.
  double photon_sphere_tortoise() const noexcept;

 private:
  double mass_;
};

/// Areal radius together with quantities that lose precision near the
/// horizon when formed from r alone.
struct RadialPoint {
  double r;             ///< areal radius
  double r_minus_2m;    ///< r - 2M, kept with full relative precision
  double f;             ///< metric factor 1 - 2M/r
};

/// r* = r + 2M ln(r - 2M). Throws DomainError for r <= 2M.
double tortoise_from_radius(double r, const SchwarzschildParams& params);

/// Same map written in terms of s = r - 2M, usable where 2M + s rounds to 2M.
double tortoise_from_horizon_offset(double s, const SchwarzschildParams& params);

/// Inverse tortoise map. Returns the areal radius; near the horizon the
/// returned double may round to exactly 2M, use radial_point() there.
double radius_from_tortoise(double x, const SchwarzschildParams& params);

/// r - 2M as a function of r*, accurate to ~1e-15 relative for every finite
/// x whose offset does not underflow.
double horizon_offset_from_tortoise(double x, const SchwarzschildParams& params);

RadialPoint radial_point(double x, const SchwarzschildParams& params);

/// Uniform grid in the tortoise coordinate with the radial data cached.
class TortoiseGrid {
 public:
  TortoiseGrid() = default;

  std::size_t size() const noexcept { return x_.size(); }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double dx() const noexcept { return dx_; }
  double mass() const noexcept { return mass_; }

  double x(std::size_t i) const { return x_[i]; }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> r() const noexcept { return r_; }
  std::span<const double> r_minus_2m() const noexcept { return s_; }
  std::span<const double> f() const noexcept { return f_; }

  /// Index of the node closest to x (clamped to the grid).
  std::size_t nearest_index(double x) const noexcept;

  bool same_layout(const TortoiseGrid& other) const noexcept;

 private:
  friend TortoiseGrid build_grid(double, double, std::size_t, const SchwarzschildParams&);

  double x_min_ = 0.0;
  double x_max_ = 0.0;
  double dx_ = 0.0;
  double mass_ = 0.0;
  std::vector<double> x_;
  std::vector<double> r_;
  std::vector<double> s_;
  std::vector<double> f_;
};

/// Grid of n nodes spanning [x_min, x_max]; n >= 3.
TortoiseGrid build_grid(double x_min, double x_max, std::size_t n,
                        const SchwarzschildParams& params);

}  // namespace rwlab
