#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rwlab/evolve.hpp"
#include "rwlab/geometry.hpp"

namespace rwlab {

struct TimeValue {
  double t = 0.0;
  double v = 0.0;
};

struct FitWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// v ~ amplitude * t^exponent, fitted as a straight line in (ln t, ln v).
struct DecayFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double residual_rms = 0.0;  ///< RMS of ln v residuals
  FitWindow window;
  std::size_t points = 0;
};

/// Values at or below this floor are treated as round-off and skipped.
inline constexpr double kSeriesFloor = 1e-30;

/// Least-squares power law over the samples with t in the window. Requires a
/// window spanning at least one decade, at least 8 usable points and no
/// negative or non-finite values in the window.
DecayFit fit_power_law(std::span<const TimeValue> series, const FitWindow& window);

struct ConvergenceOrder {
  double coarse = 0.0;  ///< log2(e(dx) / e(dx/2))
  double fine = 0.0;    ///< log2(e(dx/2) / e(dx/4))
  double order() const noexcept { return 0.5 * (coarse + fine); }
};

ConvergenceOrder convergence_order(double e_dx, double e_dx2, double e_dx4);

/// Envelope evaluated at (t, node index).
using EnvelopeFn = std::function<double(double t, std::size_t i)>;
/// Field transform applied before comparing (e.g. psi -> psi / r).
using FieldFn = std::function<double(double psi, std::size_t i)>;

/// max over snapshots and nodes of |field| / envelope; nodes with
/// |field| < 1e-14 are skipped.
double envelope_compliance(std::span<const Snapshot> snapshots, const EnvelopeFn& envelope,
                           const FieldFn& field = {});

/// First time the series falls below series[0].v / drop_factor, linearly
/// interpolated between samples; +inf when it never does.
double trapping_halftime(std::span<const TimeValue> series, double drop_factor);

/// (t, e_local) pairs from recorded energies.
std::vector<TimeValue> local_energy_series(std::span<const EnergyBreakdown> energy);
/// (t, |phi|) at the probe node.
std::vector<TimeValue> probe_phi_series(std::span<const ProbeSample> probe);

}  // namespace rwlab
