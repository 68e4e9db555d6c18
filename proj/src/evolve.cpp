#include "rwlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "rwlab/errors.hpp"
#include "rwlab/kernels.hpp"

namespace rwlab {

InitialProfile gaussian_profile(const TortoiseGrid& grid, double center, double width,
                                double amplitude, PulseDirection direction) {
  if (!(width > 0.0)) throw DomainError("gaussian_profile: width must be positive");
  InitialProfile p;
  const std::size_t n = grid.size();
  p.psi.resize(n);
  p.dpsi_dt.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (grid.x(i) - center) / width;
    const double g = amplitude * std::exp(-0.5 * z * z);
    p.psi[i] = g;
    const double dg_dx = -z / width * g;
    if (direction == PulseDirection::Outgoing) p.dpsi_dt[i] = -dg_dx;
    if (direction == PulseDirection::Ingoing) p.dpsi_dt[i] = dg_dx;
  }
  return p;
}

bool has_source(const SourceSpec& source) noexcept {
  return !std::holds_alternative<std::monostate>(source);
}

void evaluate_source(const SourceSpec& source, double t, const TortoiseGrid& grid,
                     std::span<double> h) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          std::fill(h.begin(), h.end(), 0.0);
        } else if constexpr (std::is_same_v<T, GaussianPulseSource>) {
          const double zt = (t - s.t0) / s.duration;
          const double envelope = s.amplitude * std::exp(-0.5 * zt * zt);
          for (std::size_t i = 0; i < h.size(); ++i) {
            const double zx = (grid.x(i) - s.center) / s.width;
            h[i] = envelope * std::exp(-0.5 * zx * zx);
          }
        } else {
          s(t, h);
        }
      },
      source);
}

void SemilinearSpec::validate() const {
  if (!(p > 2.0) || !std::isfinite(p)) throw DomainError("semilinear: p must exceed 2");
  if (!std::isfinite(kappa)) throw DomainError("semilinear: kappa must be finite");
}

WaveState initialize_state(const InitialProfile& profile, const TortoiseGrid& grid,
                           const PotentialTable& potential, double dt,
                           std::span<const double> h0) {
  const std::size_t n = grid.size();
  if (profile.psi.size() != n || profile.dpsi_dt.size() != n) {
    throw DomainError("initialize_state: profile does not match grid");
  }
  if (potential.size() != n) throw DomainError("initialize_state: potential does not match grid");
  if (!h0.empty() && h0.size() != n) throw DomainError("initialize_state: source size mismatch");
  if (!(dt > 0.0)) throw DomainError("initialize_state: dt must be positive");
  if (dt > grid.dx()) throw DomainError("initialize_state: Courant violation, dt > dx");
  if (!kernels::omp::all_finite(profile.psi) || !kernels::omp::all_finite(profile.dpsi_dt)) {
    throw DomainError("initialize_state: initial data not finite");
  }

  WaveState s;
  s.dt = dt;
  s.psi_curr = profile.psi;
  s.psi_prev.resize(n);
  const auto& psi = profile.psi;
  const auto q = potential.q();
  const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
  for (std::size_t i = 0; i < n; ++i) {
    double accel = 0.0;
    if (i > 0 && i + 1 < n) {
      const double lap = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) * inv_dx2;
      accel = lap - q[i] * psi[i] - (h0.empty() ? 0.0 : h0[i]);
    }
    s.psi_prev[i] = psi[i] - dt * profile.dpsi_dt[i] + 0.5 * dt * dt * accel;
  }
  return s;
}

WaveState initialize_from_levels(std::vector<double> psi_prev, std::vector<double> psi_curr,
                                 const TortoiseGrid& grid, double dt) {
  if (psi_prev.size() != grid.size() || psi_curr.size() != grid.size()) {
    throw DomainError("initialize_from_levels: levels do not match grid");
  }
  if (!(dt > 0.0) || dt > grid.dx()) throw DomainError("initialize_from_levels: need 0 < dt <= dx");
  WaveState s;
  s.dt = dt;
  s.psi_prev = std::move(psi_prev);
  s.psi_curr = std::move(psi_curr);
  return s;
}

void apply_boundary(std::span<const double> curr, std::span<double> next, double courant) {
  const std::size_t n = curr.size();
  if (n < 3 || next.size() != n) throw DomainError("apply_boundary: need at least 3 nodes");
  next[0] = curr[0] + courant * (curr[1] - curr[0]);
  next[n - 1] = curr[n - 1] - courant * (curr[n - 1] - curr[n - 2]);
}

void advance_linear(const WaveState& state, const PotentialTable& potential,
                    std::span<const double> h, const TortoiseGrid& grid, std::span<double> next) {
  const kernels::LeapfrogArgs args{state.psi_prev, state.psi_curr, potential.q(), h, state.dt,
                                   grid.dx()};
  kernels::omp::leapfrog(args, next);
  apply_boundary(state.psi_curr, next, state.dt / grid.dx());
}

namespace {

void check_finite(std::span<const double> next, std::size_t step) {
  if (!kernels::omp::all_finite(next)) {
    throw NumericalError("non-finite field at step " + std::to_string(step), step);
  }
}

void rotate(WaveState& state, std::vector<double>& next) {
  std::swap(state.psi_prev, state.psi_curr);
  std::swap(state.psi_curr, next);
  ++state.step;
  state.t = static_cast<double>(state.step) * state.dt;
}

}  // namespace

void step_linear(WaveState& state, const PotentialTable& potential, const SourceSpec& source,
                 const TortoiseGrid& grid) {
  std::vector<double> h;
  if (has_source(source)) {
    h.resize(grid.size());
    evaluate_source(source, state.t, grid, h);
  }
  std::vector<double> next(grid.size());
  advance_linear(state, potential, h, grid, next);
  check_finite(next, state.step + 1);
  rotate(state, next);
}

void semilinear_source(std::span<const double> psi, const TortoiseGrid& grid,
                       const SemilinearSpec& spec, std::span<double> h) {
  kernels::omp::nonlinear_source(psi, grid.f(), grid.r(), spec.kappa, spec.p, h);
}

void step_semilinear(WaveState& state, const PotentialTable& q0, const SemilinearSpec& spec,
                     const TortoiseGrid& grid) {
  spec.validate();
  std::vector<double> h(grid.size());
  semilinear_source(state.psi_curr, grid, spec, h);
  std::vector<double> next(grid.size());
  advance_linear(state, q0, h, grid, next);
  check_finite(next, state.step + 1);
  rotate(state, next);
}

std::string to_string(RunStatus status) {
  return status == RunStatus::Global ? "global" : "blowup";
}

Trajectory evolve(const EvolutionProblem& problem, const EvolveOptions& options) {
  if (problem.grid == nullptr || problem.potential == nullptr) {
    throw DomainError("evolve: grid and potential are required");
  }
  const TortoiseGrid& grid = *problem.grid;
  const PotentialTable& potential = *problem.potential;
  if (!(options.t_final >= 0.0)) throw DomainError("evolve: t_final must be non-negative");
  if (!(options.courant > 0.0 && options.courant <= 1.0)) {
    throw DomainError("evolve: courant must lie in (0, 1]");
  }
  if (problem.semilinear) {
    problem.semilinear->validate();
    if (has_source(problem.source)) throw DomainError("evolve: semilinear runs take no source");
  }

  const std::size_t n = grid.size();
  Trajectory traj;
  traj.dt = options.courant * grid.dx();
  const double dt = traj.dt;
  const std::size_t steps =
      options.t_final > 0.0 ? static_cast<std::size_t>(std::ceil(options.t_final / dt - 1e-9)) : 0;
  traj.steps = steps;

  std::vector<double> h(n, 0.0);
  const bool uses_h = problem.semilinear.has_value() || has_source(problem.source);
  auto fill_source = [&](double t, std::span<const double> psi) {
    if (problem.semilinear) {
      semilinear_source(psi, grid, *problem.semilinear, h);
    } else if (has_source(problem.source)) {
      evaluate_source(problem.source, t, grid, h);
    }
  };

  fill_source(0.0, problem.initial.psi);
  WaveState state = initialize_state(problem.initial, grid, potential, dt,
                                     uses_h ? std::span<const double>(h) : std::span<const double>{});
  const double initial_max = kernels::omp::max_abs(problem.initial.psi);
  const MeasureOptions measure_opts{options.window_radius, options.with_poincare,
                                    options.target_epsilon};

  std::optional<std::size_t> probe_index;
  if (options.probe_x) probe_index = grid.nearest_index(*options.probe_x);

  std::vector<double> next(n);
  std::vector<double> dpsi_dt(n);
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    fill_source(t, state.psi_curr);
    advance_linear(state, potential, uses_h ? std::span<const double>(h) : std::span<const double>{},
                   grid, next);
    check_finite(next, k + 1);

    const bool last = (k == steps);
    const bool record_energy =
        k == 0 || last || (options.energy_every > 0 && k % options.energy_every == 0);
    const bool record_snapshot =
        k == 0 || last || (options.snapshot_every > 0 && k % options.snapshot_every == 0);
    if (record_energy || record_snapshot) {
      for (std::size_t i = 0; i < n; ++i) dpsi_dt[i] = (next[i] - state.psi_prev[i]) / (2.0 * dt);
      const FieldView view{t, state.psi_curr, dpsi_dt};
      if (record_energy) {
        EnergyBreakdown e = measure(view, potential, grid, measure_opts);
        e.discrete_energy = discrete_energy(state.psi_curr, next, potential, grid, dt);
        traj.energy.push_back(e);
      }
      if (record_snapshot) traj.snapshots.push_back({t, state.psi_curr, dpsi_dt});
    }
    if (probe_index) {
      const double v = state.psi_curr[*probe_index];
      traj.probe.push_back({t, v, v / grid.r()[*probe_index]});
    }
    if (last) break;

    if (initial_max > 0.0 && kernels::omp::max_abs(next) > options.blowup_factor * initial_max) {
      traj.status = RunStatus::BlowUp;
      traj.blowup_time = static_cast<double>(k + 1) * dt;
      traj.steps = k + 1;
      break;
    }
    state.t = t;
    rotate(state, next);
  }
  return traj;
}

}  // namespace rwlab
