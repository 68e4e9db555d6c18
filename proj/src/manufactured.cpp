#include "rwlab/manufactured.hpp"

#include <cmath>

#include "rwlab/errors.hpp"
#include "rwlab/evolve.hpp"
#include "rwlab/potential.hpp"

namespace rwlab {

double ManufacturedFixture::exact(double t, double x) const {
  const double z = (x - center) / width;
  return std::sin(x - t) * std::exp(-0.5 * z * z);
}

double ManufacturedFixture::exact_dt(double t, double x) const {
  const double z = (x - center) / width;
  return -std::cos(x - t) * std::exp(-0.5 * z * z);
}

double ManufacturedFixture::source(double t, double x, double q) const {
  const double z = (x - center) / width;
  const double c = std::exp(-0.5 * z * z);
  const double c1 = -z / width * c;
  const double c2 = (z * z - 1.0) / (width * width) * c;
  const double s = std::sin(x - t);
  // -psi_tt + psi_xx = 2 cos(x - t) c' + sin(x - t) c''
  return 2.0 * std::cos(x - t) * c1 + s * c2 - q * s * c;
}

double manufactured_error(const ManufacturedFixture& fx, std::size_t n) {
  const SchwarzschildParams params(fx.mass);
  const TortoiseGrid grid = build_grid(fx.x_min, fx.x_max, n, params);
  const PotentialTable pot = build_potential_table(fx.lambda, grid, params);
  const double dt = fx.courant * grid.dx();
  const auto steps = static_cast<std::size_t>(std::llround(fx.t_final / dt));

  InitialProfile profile;
  profile.psi.resize(n);
  profile.dpsi_dt.resize(n);
  std::vector<double> h0(n);
  for (std::size_t i = 0; i < n; ++i) {
    profile.psi[i] = fx.exact(0.0, grid.x(i));
    profile.dpsi_dt[i] = fx.exact_dt(0.0, grid.x(i));
    h0[i] = fx.source(0.0, grid.x(i), pot.q()[i]);
  }
  WaveState state = initialize_state(profile, grid, pot, dt, h0);

  const auto q = pot.q();
  const SourceSpec source = SourceTable([&](double t, std::span<double> h) {
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = fx.source(t, grid.x(i), q[i]);
  });
  for (std::size_t k = 0; k < steps; ++k) step_linear(state, pot, source, grid);

  const double t_end = static_cast<double>(steps) * dt;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(state.psi_curr[i] - fx.exact(t_end, grid.x(i))));
  }
  return err;
}

ConvergenceStudy run_convergence(const ManufacturedFixture& fixture,
                                 std::span<const std::size_t> resolutions) {
  if (resolutions.size() != 3) {
    throw DomainError("convergence: exactly three resolutions are required");
  }
  for (std::size_t k = 1; k < 3; ++k) {
    if (resolutions[k] != 2 * resolutions[k - 1] - 1) {
      throw DomainError("convergence: resolutions must halve dx (n, 2n-1, 4n-3)");
    }
  }
  ConvergenceStudy study;
  study.resolutions.assign(resolutions.begin(), resolutions.end());
  for (std::size_t n : resolutions) {
    study.dx.push_back((fixture.x_max - fixture.x_min) / static_cast<double>(n - 1));
    study.errors.push_back(manufactured_error(fixture, n));
  }
  study.order = convergence_order(study.errors[0], study.errors[1], study.errors[2]);
  return study;
}

}  // namespace rwlab
