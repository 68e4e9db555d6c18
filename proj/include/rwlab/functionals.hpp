#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "rwlab/geometry.hpp"
#include "rwlab/potential.hpp"

namespace rwlab {

/// Field and time derivative on the grid at one instant.
struct FieldView {
  double t = 0.0;
  std::span<const double> psi;
  std::span<const double> dpsi_dt;
};

struct MorawetzTerms {
  double ubar_flux = 0.0;       ///< int (1 + ubar^2)(L psi)^2
  double u_flux = 0.0;          ///< int (1 + u^2)(Lbar psi)^2
  double potential_term = 0.0;  ///< int (1 + ubar^2 + u^2) Q psi^2
  double total() const noexcept { return ubar_flux + u_flux + potential_term; }
};

/// Everything recorded about one mode at one instant.
struct EnergyBreakdown {
  double t = 0.0;
  double e_basic = 0.0;
  double e_morawetz = 0.0;
  MorawetzTerms morawetz_terms;
  double e_local = 0.0;
  double trapping_integral = 0.0;
  double max_abs_psi = 0.0;
  double max_abs_rphi_weighted = 0.0;  ///< max |psi| / sobolev_envelope
  double discrete_energy = 0.0;        ///< leapfrog-conserved energy at t + dt/2
  double poincare_ratio = 0.0;
  double target_ratio = 0.0;           ///< max |psi/r| / pointwise_target, when requested
};

/// Centered d/dx, one-sided at the two end nodes.
void gradient(std::span<const double> psi, double dx, std::span<double> out);

/// int (L psi)^2 + (Lbar psi)^2 + Q psi^2 dx by the trapezoid rule.
double basic_energy(const FieldView& field, const PotentialTable& potential,
                    const TortoiseGrid& grid);

/// Morawetz energy with ubar = t + x, u = t - x in the unshifted r*.
MorawetzTerms morawetz_energy(const FieldView& field, const PotentialTable& potential,
                              const TortoiseGrid& grid);

/// K0 momentum density at node i:
/// 1/4 ubar^2 (L psi)^2 + 1/4 u^2 (Lbar psi)^2 + 1/4 (ubar^2 + u^2) Q psi^2.
double k0_density(const FieldView& field, const PotentialTable& potential,
                  const TortoiseGrid& grid, std::size_t i);

/// Basic-energy integrand summed over |x - center| <= radius. The window is
/// clipped to the grid; DomainError if it holds fewer than two nodes.
double local_energy(const FieldView& field, const PotentialTable& potential,
                    const TortoiseGrid& grid, double radius, double center);
/// Window centred on the photon sphere r*(3M).
double local_energy(const FieldView& field, const PotentialTable& potential,
                    const TortoiseGrid& grid, double radius);

/// int (y dQ/dy + 2Q) psi^2 dx with y = x - x0(lambda).
double trapping_integral(const FieldView& field, const PotentialTable& potential,
                         const TortoiseGrid& grid);

/// Energy conserved exactly (up to round-off) by the leapfrog update away from
/// the boundaries:
///   sum dx [ ((next - curr)/dt)^2 + D+next D+curr + Q next curr ].
/// Its continuum limit is int psi_t^2 + psi_x^2 + Q psi^2.
double discrete_energy(std::span<const double> curr, std::span<const double> next,
                       const PotentialTable& potential, const TortoiseGrid& grid, double dt);

/// int psi^2 divided by
/// int ubar^2 (L psi)^2 + u^2 (Lbar psi)^2 + (1 + ubar^2 + u^2) f psi^2 / r^3.
double poincare_ratio(const FieldView& field, const TortoiseGrid& grid);

/// phi(x) = int_0^x (1 + |y|)^-k dy; requires k > 1.
double multiplier_weight(double x, double k);

/// min{1, r^(1/2) f^(-1/4) |t - |x||^-1, |t - |x||^-1/2}; the singular branches
/// count as +inf when t = |x|.
double sobolev_envelope(double t, double x, const RadialPoint& p) noexcept;
double sobolev_envelope(double t, double x, const SchwarzschildParams& params);

/// epsilon min{1, |t - |x||^-1/2} / r(x).
double pointwise_target(double t, double x, double r, double epsilon);
double pointwise_target(double t, double x, const SchwarzschildParams& params, double epsilon);

/// max over nodes of |psi| / sobolev_envelope, ignoring |psi| below 1e-14.
double sobolev_ratio(const FieldView& field, const TortoiseGrid& grid);

struct MeasureOptions {
  double window_radius = 20.0;
  bool with_poincare = true;
  std::optional<double> target_epsilon;  ///< fills target_ratio when set
};

/// max over nodes of |psi/r| / pointwise_target(t, x, r, epsilon), ignoring
/// |psi/r| below 1e-14.
double target_ratio(const FieldView& field, const TortoiseGrid& grid, double epsilon);

EnergyBreakdown measure(const FieldView& field, const PotentialTable& potential,
                        const TortoiseGrid& grid, const MeasureOptions& options = {});

}  // namespace rwlab
