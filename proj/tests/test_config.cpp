#include <cmath>
#include <string>

#include "doctest.h"
#include "rwlab/config.hpp"
#include "rwlab/errors.hpp"

using namespace rwlab;

namespace {

std::string rejected_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config("{}");
  CHECK(c.mass == 1.0);
  CHECK(c.grid.x_min == -400.0);
  CHECK(c.grid.x_max == 600.0);
  CHECK(c.courant == 0.9);
  CHECK(c.initial_data.center == 10.0);
  CHECK(c.initial_data.width == 2.0);
  CHECK(c.modes.empty());
  CHECK_FALSE(c.semilinear.has_value());
  CHECK_FALSE(c.verification.has_value());
}

TEST_CASE("full document") {
  const RunConfig c = parse_config(R"({
    "mass": 2.0,
    "grid": {"x_min": -100, "x_max": 200, "n": 3001},
    "courant": 0.5, "t_final": 40,
    "initial_data": {"type": "gaussian", "center": 3, "width": 1.5, "amplitude": 0.2, "direction": "ingoing"},
    "modes": [{"l": 2, "m": -1}, {"l": 0, "m": 0, "profile": {"center": -4}}],
    "source": {"type": "gaussian-pulse", "amplitude": 1, "center": 0, "width": 2, "t0": 5, "duration": 1},
    "outputs": {"dir": "o", "energy_every": 3, "snapshot_every": 7},
    "verification": {"lambda_list": [0, 1.5], "C_grid": {"min": 0.1, "max": 100, "factor": 4},
                     "b_grid": {"b1": [0.5], "b2": [1, 2]}, "fixture": "synthetic-negative"},
    "analysis": {"window_radius": 10, "fit_window": [20, 400], "drop_factor": 50, "probe_x": 4},
    "convergence": {"fixture": "manufactured-sine", "l": 1, "resolutions": [101, 201, 401]}
  })");
  CHECK(c.mass == 2.0);
  CHECK(c.grid.n == 3001);
  CHECK(c.initial_data.direction == PulseDirection::Ingoing);
  REQUIRE(c.modes.size() == 2);
  CHECK(c.modes[0].m == -1);
  REQUIRE(c.modes[1].profile.has_value());
  CHECK(c.modes[1].profile->center == -4.0);
  CHECK(c.modes[1].profile->amplitude == 0.2);  // inherits from initial_data
  REQUIRE(c.source.has_value());
  CHECK(c.source->t0 == 5.0);
  CHECK(c.outputs.snapshot_every == 7);
  REQUIRE(c.verification.has_value());
  CHECK(c.verification->lambdas.size() == 2);
  CHECK(c.verification->candidates.c_factor == 4.0);
  CHECK(c.verification->fixture == VerificationFixture::SyntheticNegative);
  CHECK(c.analysis.fit_window.t_hi == 400.0);
  REQUIRE(c.analysis.probe_x.has_value());
  REQUIRE(c.convergence.has_value());
  CHECK(c.convergence->fixture.mass == 2.0);
  CHECK(c.convergence->resolutions[2] == 401);
}

TEST_CASE("mode sweeps") {
  const RunConfig c = parse_config(R"({"modes": {"l_max": 3}, "verification": {"l_max": 2}})");
  REQUIRE(c.modes.size() == 4);
  CHECK(c.modes[3].l == 3);
  REQUIRE(c.verification->lambdas.size() == 3);
  CHECK(c.verification->lambdas[2] == doctest::Approx(std::sqrt(6.0)));
  CHECK(parse_config(R"({"verification": {}})").verification->lambdas.size() == 21);
}

TEST_CASE("rejections name the key") {
  CHECK(rejected_key(R"({"bogus": 1})") == "bogus");
  CHECK(rejected_key(R"({"grid": {"x_min": 0, "x_max": 1, "dx": 0.1}})") == "grid.dx");
  CHECK(rejected_key(R"({"grid": {"x_min": 5, "x_max": 1}})") == "grid.x_max");
  CHECK(rejected_key(R"({"grid": {"n": 2}})") == "grid.n");
  CHECK(rejected_key(R"({"mass": -1})") == "mass");
  CHECK(rejected_key(R"({"mass": "one"})") == "mass");
  CHECK(rejected_key(R"({"courant": 1.2})") == "courant");
  CHECK(rejected_key(R"({"modes": [{"l": 1, "m": 2}]})") == "modes[0].m");
  CHECK(rejected_key(R"({"modes": [{"l": 1, "extra": 2}]})") == "modes[0].extra");
  CHECK(rejected_key(R"({"initial_data": {"type": "box"}})") == "initial_data.type");
  CHECK(rejected_key(R"({"initial_data": {"direction": "up"}})") == "initial_data.direction");
  CHECK(rejected_key(R"({"semilinear": {"p": 2}})") == "semilinear.p");
  CHECK(rejected_key(R"({"semilinear": {"p": 3}, "source": {"amplitude": 1}})") == "source");
  CHECK(rejected_key(R"({"verification": {"fixture": "nope"}})") == "verification.fixture");
  CHECK(rejected_key(R"({"verification": {"l_max": 2, "lambda_list": [1]}})") == "verification");
  CHECK(rejected_key(R"({"verification": {"C_grid": {"factor": 1}}})") == "verification.C_grid.factor");
  CHECK(rejected_key(R"({"convergence": {"resolutions": [101]}})") == "convergence.resolutions");
  CHECK(rejected_key(R"({"convergence": {"resolutions": [101, 200, 401]}})") == "convergence.resolutions");
  CHECK(rejected_key(R"({"analysis": {"fit_window": [10]}})") == "analysis.fit_window");
  CHECK(rejected_key(R"({"outputs": {"energy_every": -1}})") == "outputs.energy_every");
  CHECK(rejected_key("{not json") == "<document>");
  CHECK(rejected_key("[1, 2]") == "<root>");
}

TEST_CASE("profiles are built on the grid") {
  const SchwarzschildParams p(1.0);
  const TortoiseGrid g = build_grid(-10.0, 10.0, 201, p);
  ProfileConfig pc;
  pc.center = 0.0;
  pc.width = 1.0;
  pc.amplitude = 3.0;
  const InitialProfile ip = make_profile(pc, g);
  CHECK(ip.psi[100] == doctest::Approx(3.0));
  CHECK(ip.psi[110] == doctest::Approx(3.0 * std::exp(-0.5)));
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}
