#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rwlab/geometry.hpp"

namespace rwlab {

/// Spherical-harmonic label with its angular frequency lambda = sqrt(l(l+1)).
struct ModeSpec {
  int l = 0;
  int m = 0;
  double lambda = 0.0;

  static ModeSpec from_degree(int l, int m = 0);
};

/// Regge-Wheeler potential Q = f (2M/r^3 + lambda^2/r^2). Throws for r <= 2M.
double potential_value(double lambda, double r, const SchwarzschildParams& params);
double potential_value(double lambda, const RadialPoint& p, double mass) noexcept;

/// dQ/dr* = -(2/r^5) f [lambda^2 r^2 - 3M(lambda^2 - 1) r - 8M^2].
double potential_derivative(double lambda, double r, const SchwarzschildParams& params);
double potential_derivative(double lambda, const RadialPoint& p, double mass) noexcept;

/// The unique positive root r(lambda) of the bracket polynomial, in [8M/3, 3M).
double critical_radius(double lambda, const SchwarzschildParams& params);

/// x0(lambda) = r*(r(lambda)); tends to r*(3M) as lambda grows.
double critical_tortoise(double lambda, const SchwarzschildParams& params);

/// Second r*-derivative of Q at its maximum; strictly negative, O(lambda^2).
double second_derivative_at_critical(double lambda, const SchwarzschildParams& params);

/// Q and dQ/dr* sampled on a grid, together with the critical point data
/// of the mode. Tables built by build_potential_table are non-negative with a
/// single maximum at x0; synthetic tables (from_samples) carry no guarantees
/// and exist to exercise the condition verifier.
class PotentialTable {
 public:
  PotentialTable() = default;

  static PotentialTable from_samples(double lambda, std::vector<double> q, std::vector<double> dq,
                                     double x0, double r_crit);
  /// Q = 0 on every node (free 1+1 wave equation).
  static PotentialTable zero(std::size_t n, double x0 = 0.0);

  double lambda() const noexcept { return lambda_; }
  double x0() const noexcept { return x0_; }
  double r_crit() const noexcept { return r_crit_; }
  std::span<const double> q() const noexcept { return q_; }
  std::span<const double> dq() const noexcept { return dq_; }
  std::size_t size() const noexcept { return q_.size(); }

 private:
  friend PotentialTable build_potential_table(double, const TortoiseGrid&,
                                              const SchwarzschildParams&);
  double lambda_ = 0.0;
  double x0_ = 0.0;
  double r_crit_ = 0.0;
  std::vector<double> q_;
  std::vector<double> dq_;
};

PotentialTable build_potential_table(double lambda, const TortoiseGrid& grid,
                                     const SchwarzschildParams& params);

/// Regge-Wheeler tables for l = 0..l_max.
std::vector<PotentialTable> build_family(int l_max, const TortoiseGrid& grid,
                                         const SchwarzschildParams& params);

// ---------------------------------------------------------------------------
// Strongly repulsive conditions

inline constexpr std::size_t kConditionCount = 6;

/// Printable labels of the six conditions, in checking order.
inline constexpr std::array<std::string_view, kConditionCount> kConditionNames = {
    "(Positivity)", "(Repulsive 1)", "(Repulsive 2)",
    "(Homogeneity)", "(Critical Point)", "(Local Bounds)"};

struct RepulsiveConstants {
  double c = 1.0;
  double b1 = 1.0;  ///< B1 = [-b1, b1] in the shifted coordinate
  double b2 = 2.0;  ///< B2 = [-b2, b2]
};

/// Worst (smallest) margin rhs - lhs for one condition; pass iff margin >= 0
/// at every checked node. `checked` is false when no node fell in the region.
struct ConditionResult {
  bool pass = true;
  bool checked = false;
  double worst_margin = 0.0;
  double worst_location = 0.0;  ///< shifted coordinate y of the worst node
};

struct ModeConditionReport {
  double lambda = 0.0;
  std::array<ConditionResult, kConditionCount> conditions{};
  bool pass() const noexcept;
};

struct ConditionReport {
  RepulsiveConstants constants;
  std::vector<ModeConditionReport> modes;

  bool pass() const noexcept;
  bool condition_pass(std::size_t k) const noexcept;
  /// Name of the first failing condition, if any.
  std::optional<std::string_view> first_failure() const noexcept;
};

/// Checks the six conditions node by node in y = x - x0(lambda).
/// Throws DomainError when a table does not match the grid or the constants
/// are out of range.
ConditionReport verify_conditions(std::span<const PotentialTable> family,
                                  const RepulsiveConstants& constants, const TortoiseGrid& grid);

/// Pass/fail only; stops at the first violated node.
bool conditions_hold(std::span<const PotentialTable> family, const RepulsiveConstants& constants,
                     const TortoiseGrid& grid);

struct ConstantSearchGrid {
  double c_min = 1e-2;
  double c_max = 1e6;
  double c_factor = 2.0;
  std::vector<double> b1 = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
  /// Widest first, so B2 encloses the whole region where the trapping term is positive.
  std::vector<double> b2 = {32.0, 16.0, 8.0, 4.0, 2.0, 1.0, 0.5};

  std::vector<double> c_values() const;
};

/// Smallest C on the candidate ladder, then the first (b1, b2) with b1 < b2,
/// for which every family member passes. nullopt when infeasible.
std::optional<RepulsiveConstants> search_constants(std::span<const PotentialTable> family,
                                                   const TortoiseGrid& grid,
                                                   const ConstantSearchGrid& candidates = {});

/// y dQ/dy + 2Q at x = x0(lambda) + y.
double trapping_term(double lambda, double y, const SchwarzschildParams& params);
/// Grid-checked variant: x0(lambda) + y must lie inside the grid.
double trapping_term(double lambda, double y, const SchwarzschildParams& params,
                     const TortoiseGrid& grid);

/// Potential weight of the 3-D energy on one harmonic, f (lambda^2/r^2 + M/r^3).
double angular_energy_potential(double lambda, const RadialPoint& p, double mass) noexcept;

}  // namespace rwlab
