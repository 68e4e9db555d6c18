#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rwlab/functionals.hpp"
#include "rwlab/geometry.hpp"
#include "rwlab/potential.hpp"

namespace rwlab {

/// Two time levels of the discrete field; psi_curr lives at time t.
struct WaveState {
  double t = 0.0;
  double dt = 0.0;
  std::size_t step = 0;
  std::vector<double> psi_prev;
  std::vector<double> psi_curr;
};

/// psi(0, x) and d_t psi(0, x) on the grid.
struct InitialProfile {
  std::vector<double> psi;
  std::vector<double> dpsi_dt;
};

enum class PulseDirection { Static, Outgoing, Ingoing };

/// amplitude * exp(-(x - center)^2 / (2 width^2)); Outgoing/Ingoing set
/// d_t psi = -/+ d_x psi so the pulse moves right/left.
InitialProfile gaussian_profile(const TortoiseGrid& grid, double center, double width,
                                double amplitude, PulseDirection direction = PulseDirection::Static);

/// H(t, x) = amplitude exp(-(x - center)^2/(2 width^2)) exp(-(t - t0)^2/(2 duration^2)).
struct GaussianPulseSource {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  double t0 = 0.0;
  double duration = 1.0;
};

/// Arbitrary tabulated source: fills H(t, x_i) for every node.
using SourceTable = std::function<void(double t, std::span<double> h)>;

using SourceSpec = std::variant<std::monostate, GaussianPulseSource, SourceTable>;

bool has_source(const SourceSpec& source) noexcept;
/// H(t, .) on the grid; zero when there is no source.
void evaluate_source(const SourceSpec& source, double t, const TortoiseGrid& grid,
                     std::span<double> h);

/// Coupling of the semilinear term kappa |phi|^p phi; p > 2.
struct SemilinearSpec {
  double p = 3.0;
  double kappa = 1.0;

  void validate() const;
};

/// Taylor start: psi_prev = psi - dt psi_t + dt^2/2 (D2 psi - Q psi - H(0)).
/// `h0` is H at t = 0 (empty for none). Throws DomainError when dt > dx.
WaveState initialize_state(const InitialProfile& profile, const TortoiseGrid& grid,
                           const PotentialTable& potential, double dt,
                           std::span<const double> h0 = {});

/// Two exact levels psi(-dt) and psi(0).
WaveState initialize_from_levels(std::vector<double> psi_prev, std::vector<double> psi_curr,
                                 const TortoiseGrid& grid, double dt);

/// Outgoing conditions on the new level: d_t psi = d_x psi at the left end,
/// d_t psi = -d_x psi at the right end, first-order upwind.
void apply_boundary(std::span<const double> curr, std::span<double> next, double courant);

/// Computes the level after `state` into `next` without advancing the state.
void advance_linear(const WaveState& state, const PotentialTable& potential,
                    std::span<const double> h, const TortoiseGrid& grid, std::span<double> next);

/// One leapfrog step of -psi_tt + psi_xx - Q psi = H. Throws NumericalError
/// (carrying the step index) when the new level is not finite.
void step_linear(WaveState& state, const PotentialTable& potential, const SourceSpec& source,
                 const TortoiseGrid& grid);

/// H_i = f_i kappa |psi_i|^p psi_i / r_i^p, the l = 0 reduction of
/// box phi = kappa |phi|^p phi with psi = r phi.
void semilinear_source(std::span<const double> psi, const TortoiseGrid& grid,
                       const SemilinearSpec& spec, std::span<double> h);

void step_semilinear(WaveState& state, const PotentialTable& q0, const SemilinearSpec& spec,
                     const TortoiseGrid& grid);

// ---------------------------------------------------------------------------
// Driver

struct Snapshot {
  double t = 0.0;
  std::vector<double> psi;
  std::vector<double> dpsi_dt;

  FieldView view() const noexcept { return {t, psi, dpsi_dt}; }
};

struct ProbeSample {
  double t = 0.0;
  double psi = 0.0;
  double phi = 0.0;  ///< psi / r at the probe node
};

enum class RunStatus { Global, BlowUp };

struct EvolveOptions {
  double t_final = 0.0;
  double courant = 0.9;
  std::size_t energy_every = 10;    ///< steps between energy records (0: first/last only)
  std::size_t snapshot_every = 0;   ///< steps between snapshots (0: first/last only)
  double window_radius = 20.0;      ///< local-energy window around r*(3M)
  std::optional<double> probe_x;    ///< record psi at this r* every step
  double blowup_factor = 1e6;       ///< stop when max|psi| exceeds this times the initial max
  bool with_poincare = true;
  std::optional<double> target_epsilon;  ///< record max |phi| / pointwise_target
};

struct Trajectory {
  double dt = 0.0;
  std::size_t steps = 0;
  RunStatus status = RunStatus::Global;
  std::optional<double> blowup_time;
  std::vector<EnergyBreakdown> energy;
  std::vector<Snapshot> snapshots;
  std::vector<ProbeSample> probe;
};

/// Linear problem on one harmonic, or the l = 0 semilinear problem when
/// `semilinear` is set (then `potential` must be the lambda = 0 table).
struct EvolutionProblem {
  const TortoiseGrid* grid = nullptr;
  const PotentialTable* potential = nullptr;
  InitialProfile initial;
  SourceSpec source;
  std::optional<SemilinearSpec> semilinear;
};

/// Runs ceil(t_final/dt) steps with dt = courant dx. Functionals at t_n use
/// d_t psi = (psi^{n+1} - psi^{n-1}) / (2 dt). Deterministic for fixed input.
Trajectory evolve(const EvolutionProblem& problem, const EvolveOptions& options);

std::string to_string(RunStatus status);

}  // namespace rwlab
