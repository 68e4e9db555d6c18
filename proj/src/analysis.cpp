#include "rwlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rwlab/errors.hpp"

namespace rwlab {

DecayFit fit_power_law(std::span<const TimeValue> series, const FitWindow& window) {
  if (!(window.t_lo > 0.0) || !(window.t_lo < window.t_hi)) {
    throw DomainError("fit_power_law: window needs 0 < t_lo < t_hi");
  }
  if (window.t_hi < 10.0 * window.t_lo * (1.0 - 1e-12)) {
    throw DomainError("fit_power_law: window spans less than one decade");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& s : series) {
    if (s.t < window.t_lo || s.t > window.t_hi) continue;
    if (!std::isfinite(s.v) || s.v < 0.0) {
      throw DomainError("fit_power_law: negative or non-finite value at t = " + std::to_string(s.t));
    }
    if (s.v <= kSeriesFloor) continue;
    lx.push_back(std::log(s.t));
    ly.push_back(std::log(s.v));
  }
  const std::size_t n = lx.size();
  if (n < 8) throw DomainError("fit_power_law: fewer than 8 usable points in window");

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_power_law: degenerate time samples");

  DecayFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.amplitude = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double res = ly[i] - (intercept + fit.exponent * lx[i]);
    ss += res * res;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
  fit.window = window;
  fit.points = n;
  return fit;
}

ConvergenceOrder convergence_order(double e_dx, double e_dx2, double e_dx4) {
  if (!(e_dx > 0.0) || !(e_dx2 > 0.0) || !(e_dx4 > 0.0)) {
    throw DomainError("convergence_order: errors must be positive");
  }
  return {std::log2(e_dx / e_dx2), std::log2(e_dx2 / e_dx4)};
}

double envelope_compliance(std::span<const Snapshot> snapshots, const EnvelopeFn& envelope,
                           const FieldFn& field) {
  constexpr double floor = 1e-14;
  double worst = 0.0;
  for (const auto& snap : snapshots) {
    for (std::size_t i = 0; i < snap.psi.size(); ++i) {
      const double v = std::abs(field ? field(snap.psi[i], i) : snap.psi[i]);
      if (v < floor) continue;
      worst = std::max(worst, v / envelope(snap.t, i));
    }
  }
  return worst;
}

double trapping_halftime(std::span<const TimeValue> series, double drop_factor) {
  if (series.empty()) throw DomainError("trapping_halftime: empty series");
  if (!(drop_factor > 1.0)) throw DomainError("trapping_halftime: drop factor must exceed 1");
  const double threshold = series.front().v / drop_factor;
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (series[k].v < threshold) {
      const auto& a = series[k - 1];
      const auto& b = series[k];
      const double frac = (a.v - threshold) / (a.v - b.v);
      return a.t + frac * (b.t - a.t);
    }
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<TimeValue> local_energy_series(std::span<const EnergyBreakdown> energy) {
  std::vector<TimeValue> out;
  out.reserve(energy.size());
  for (const auto& e : energy) out.push_back({e.t, e.e_local});
  return out;
}

std::vector<TimeValue> probe_phi_series(std::span<const ProbeSample> probe) {
  std::vector<TimeValue> out;
  out.reserve(probe.size());
  for (const auto& p : probe) out.push_back({p.t, std::abs(p.phi)});
  return out;
}

}  // namespace rwlab
