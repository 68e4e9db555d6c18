#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rwlab/analysis.hpp"
#include "rwlab/evolve.hpp"
#include "rwlab/manufactured.hpp"
#include "rwlab/potential.hpp"

namespace rwlab {

struct GridConfig {
  double x_min = -400.0;
  double x_max = 600.0;
  std::size_t n = 10001;
};

struct ProfileConfig {
  std::string type = "gaussian";
  double center = 10.0;
  double width = 2.0;
  double amplitude = 1.0;
  PulseDirection direction = PulseDirection::Static;
};

struct ModeConfig {
  int l = 0;
  int m = 0;
  std::optional<ProfileConfig> profile;
};

struct OutputConfig {
  std::string dir = "out";
  std::size_t energy_every = 10;
  std::size_t snapshot_every = 0;
};

enum class VerificationFixture { ReggeWheeler, SyntheticSquare, SyntheticNegative };

struct VerificationConfig {
  std::vector<double> lambdas;  ///< from lambda_list, or sqrt(l(l+1)) for l = 0..l_max
  GridConfig grid{-150.0, 150.0, 6001};
  ConstantSearchGrid candidates;
  VerificationFixture fixture = VerificationFixture::ReggeWheeler;
};

struct SemilinearConfig {
  SemilinearSpec spec;
  double blowup_factor = 1e6;
};

struct AnalysisConfig {
  double window_radius = 20.0;
  FitWindow fit_window{50.0, 500.0};
  double drop_factor = 100.0;
  std::optional<double> probe_x;  ///< defaults to r*(3M)
};

struct ConvergenceConfig {
  ManufacturedFixture fixture;
  std::vector<std::size_t> resolutions{401, 801, 1601};
};

struct RunConfig {
  double mass = 1.0;
  GridConfig grid;
  std::vector<ModeConfig> modes;
  double courant = 0.9;
  double t_final = 500.0;
  ProfileConfig initial_data;
  std::optional<GaussianPulseSource> source;
  std::optional<SemilinearConfig> semilinear;
  OutputConfig outputs;
  std::optional<VerificationConfig> verification;
  AnalysisConfig analysis;
  std::optional<ConvergenceConfig> convergence;
};

/// Parses a JSON document. Throws ConfigError naming the first unknown key or
/// invalid value.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Initial data for one mode: its own profile or the global one.
InitialProfile make_profile(const ProfileConfig& profile, const TortoiseGrid& grid);

}  // namespace rwlab
