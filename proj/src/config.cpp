#include "rwlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rwlab/errors.hpp"

namespace rwlab {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so that leftovers
// can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  ~ObjectReader() = default;

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key_path(key), "must be finite");
    return d;
  }

  double positive(const std::string& key, double fallback) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) throw ConfigError(key_path(key), "must be positive");
    return d;
  }

  long long integer(const std::string& key, long long fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
    return v.get<long long>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const long long v = integer(key, static_cast<long long>(fallback));
    if (v < 0) throw ConfigError(key_path(key), "must be non-negative");
    return static_cast<std::size_t>(v);
  }

  std::string string(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(key_path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(key_path(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(key_path(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GridConfig parse_grid(const json& j, const std::string& path, GridConfig g) {
  ObjectReader rd(j, path);
  g.x_min = rd.number("x_min", g.x_min);
  g.x_max = rd.number("x_max", g.x_max);
  g.n = rd.count("n", g.n);
  rd.finish();
  if (!(g.x_min < g.x_max)) throw ConfigError(path + ".x_max", "must exceed x_min");
  if (g.n < 3) throw ConfigError(path + ".n", "need at least 3 nodes");
  return g;
}

ProfileConfig parse_profile(const json& j, const std::string& path, ProfileConfig p) {
  ObjectReader rd(j, path);
  p.type = rd.string("type", p.type);
  if (p.type != "gaussian") throw ConfigError(rd.key_path("type"), "only \"gaussian\" is supported");
  p.center = rd.number("center", p.center);
  p.width = rd.positive("width", p.width);
  p.amplitude = rd.number("amplitude", p.amplitude);
  const std::string dir = rd.string("direction", "static");
  if (dir == "static") {
    p.direction = PulseDirection::Static;
  } else if (dir == "outgoing") {
    p.direction = PulseDirection::Outgoing;
  } else if (dir == "ingoing") {
    p.direction = PulseDirection::Ingoing;
  } else {
    throw ConfigError(rd.key_path("direction"), "expected static, outgoing or ingoing");
  }
  rd.finish();
  return p;
}

std::vector<ModeConfig> parse_modes(const json& j, const ProfileConfig& defaults) {
  std::vector<ModeConfig> modes;
  if (j.is_object()) {
    ObjectReader rd(j, "modes");
    const long long l_max = rd.integer("l_max", -1);
    rd.finish();
    if (l_max < 0) throw ConfigError("modes.l_max", "must be a non-negative integer");
    for (long long l = 0; l <= l_max; ++l) modes.push_back({static_cast<int>(l), 0, std::nullopt});
    return modes;
  }
  if (!j.is_array()) throw ConfigError("modes", "expected a list of {l, m} or {\"l_max\": n}");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string path = "modes[" + std::to_string(k) + "]";
    ObjectReader rd(j[k], path);
    ModeConfig m;
    const long long l = rd.integer("l", -1);
    const long long mm = rd.integer("m", 0);
    if (l < 0 || l > 100000) throw ConfigError(path + ".l", "must be a non-negative integer");
    if (std::llabs(mm) > l) throw ConfigError(path + ".m", "|m| must not exceed l");
    m.l = static_cast<int>(l);
    m.m = static_cast<int>(mm);
    if (rd.has("profile")) m.profile = parse_profile(rd.raw("profile"), path + ".profile", defaults);
    rd.finish();
    modes.push_back(m);
  }
  return modes;
}

GaussianPulseSource parse_source(const json& j) {
  ObjectReader rd(j, "source");
  const std::string type = rd.string("type", "gaussian-pulse");
  if (type != "gaussian-pulse") throw ConfigError("source.type", "only \"gaussian-pulse\" is supported");
  GaussianPulseSource s;
  s.amplitude = rd.number("amplitude", 0.0);
  s.center = rd.number("center", 0.0);
  s.width = rd.positive("width", 1.0);
  s.t0 = rd.number("t0", 0.0);
  s.duration = rd.positive("duration", 1.0);
  rd.finish();
  return s;
}

SemilinearConfig parse_semilinear(const json& j) {
  ObjectReader rd(j, "semilinear");
  SemilinearConfig c;
  c.spec.p = rd.number("p", c.spec.p);
  c.spec.kappa = rd.number("kappa", c.spec.kappa);
  c.blowup_factor = rd.positive("blowup_factor", c.blowup_factor);
  rd.finish();
  if (!(c.spec.p > 2.0)) throw ConfigError("semilinear.p", "must exceed 2");
  return c;
}

OutputConfig parse_outputs(const json& j) {
  ObjectReader rd(j, "outputs");
  OutputConfig o;
  o.dir = rd.string("dir", o.dir);
  o.energy_every = rd.count("energy_every", o.energy_every);
  o.snapshot_every = rd.count("snapshot_every", o.snapshot_every);
  rd.finish();
  return o;
}

VerificationConfig parse_verification(const json& j) {
  ObjectReader rd(j, "verification");
  VerificationConfig v;
  const bool has_list = rd.has("lambda_list");
  const bool has_lmax = rd.has("l_max");
  if (has_list && has_lmax) throw ConfigError("verification", "give lambda_list or l_max, not both");
  if (has_list) {
    v.lambdas = rd.numbers("lambda_list");
    for (double l : v.lambdas) {
      if (!(l >= 0.0)) throw ConfigError("verification.lambda_list", "lambdas must be >= 0");
    }
  } else {
    const long long l_max = rd.integer("l_max", 20);
    if (l_max < 0) throw ConfigError("verification.l_max", "must be non-negative");
    for (long long l = 0; l <= l_max; ++l) v.lambdas.push_back(ModeSpec::from_degree(static_cast<int>(l)).lambda);
  }
  if (v.lambdas.empty()) throw ConfigError("verification.lambda_list", "must not be empty");
  if (rd.has("grid")) v.grid = parse_grid(rd.raw("grid"), "verification.grid", v.grid);
  if (rd.has("C_grid")) {
    ObjectReader cg(rd.raw("C_grid"), "verification.C_grid");
    v.candidates.c_min = cg.positive("min", v.candidates.c_min);
    v.candidates.c_max = cg.positive("max", v.candidates.c_max);
    v.candidates.c_factor = cg.positive("factor", v.candidates.c_factor);
    cg.finish();
    if (!(v.candidates.c_factor > 1.0)) throw ConfigError("verification.C_grid.factor", "must exceed 1");
    if (!(v.candidates.c_max >= v.candidates.c_min)) {
      throw ConfigError("verification.C_grid.max", "must be at least min");
    }
  }
  if (rd.has("b_grid")) {
    ObjectReader bg(rd.raw("b_grid"), "verification.b_grid");
    if (bg.has("b1")) v.candidates.b1 = bg.numbers("b1");
    if (bg.has("b2")) v.candidates.b2 = bg.numbers("b2");
    bg.finish();
    for (double b : v.candidates.b1) {
      if (!(b > 0.0)) throw ConfigError("verification.b_grid.b1", "entries must be positive");
    }
    for (double b : v.candidates.b2) {
      if (!(b > 0.0)) throw ConfigError("verification.b_grid.b2", "entries must be positive");
    }
  }
  const std::string fixture = rd.string("fixture", "regge-wheeler");
  if (fixture == "regge-wheeler") {
    v.fixture = VerificationFixture::ReggeWheeler;
  } else if (fixture == "synthetic-square") {
    v.fixture = VerificationFixture::SyntheticSquare;
  } else if (fixture == "synthetic-negative") {
    v.fixture = VerificationFixture::SyntheticNegative;
  } else {
    throw ConfigError("verification.fixture",
                      "expected regge-wheeler, synthetic-square or synthetic-negative");
  }
  rd.finish();
  return v;
}

AnalysisConfig parse_analysis(const json& j) {
  ObjectReader rd(j, "analysis");
  AnalysisConfig a;
  a.window_radius = rd.positive("window_radius", a.window_radius);
  if (rd.has("fit_window")) {
    const auto w = rd.numbers("fit_window");
    if (w.size() != 2 || !(w[0] > 0.0) || !(w[0] < w[1])) {
      throw ConfigError("analysis.fit_window", "expected [t_lo, t_hi] with 0 < t_lo < t_hi");
    }
    a.fit_window = {w[0], w[1]};
  }
  a.drop_factor = rd.number("drop_factor", a.drop_factor);
  if (!(a.drop_factor > 1.0)) throw ConfigError("analysis.drop_factor", "must exceed 1");
  if (rd.has("probe_x")) a.probe_x = rd.number("probe_x", 0.0);
  rd.finish();
  return a;
}

ConvergenceConfig parse_convergence(const json& j, double mass) {
  ObjectReader rd(j, "convergence");
  ConvergenceConfig c;
  c.fixture.mass = mass;
  const std::string fixture = rd.string("fixture", "manufactured-sine");
  if (fixture != "manufactured-sine") {
    throw ConfigError("convergence.fixture", "only \"manufactured-sine\" is available");
  }
  const long long l = rd.integer("l", 2);
  if (l < 0) throw ConfigError("convergence.l", "must be non-negative");
  c.fixture.lambda = ModeSpec::from_degree(static_cast<int>(l)).lambda;
  c.fixture.x_min = rd.number("x_min", c.fixture.x_min);
  c.fixture.x_max = rd.number("x_max", c.fixture.x_max);
  c.fixture.center = rd.number("center", c.fixture.center);
  c.fixture.width = rd.positive("width", c.fixture.width);
  c.fixture.t_final = rd.positive("t_final", c.fixture.t_final);
  c.fixture.courant = rd.positive("courant", c.fixture.courant);
  if (rd.has("resolutions")) {
    const json& r = rd.raw("resolutions");
    if (!r.is_array()) throw ConfigError("convergence.resolutions", "expected an array of integers");
    c.resolutions.clear();
    for (const auto& e : r) {
      if (!e.is_number_integer() || e.get<long long>() < 3) {
        throw ConfigError("convergence.resolutions", "entries must be integers >= 3");
      }
      c.resolutions.push_back(e.get<std::size_t>());
    }
  }
  rd.finish();
  if (c.resolutions.size() != 3) {
    throw ConfigError("convergence.resolutions", "exactly three resolutions are required");
  }
  for (std::size_t k = 1; k < 3; ++k) {
    if (c.resolutions[k] != 2 * c.resolutions[k - 1] - 1) {
      throw ConfigError("convergence.resolutions", "must be nested as n, 2n-1, 4n-3");
    }
  }
  if (!(c.fixture.x_min < c.fixture.x_max)) throw ConfigError("convergence.x_max", "must exceed x_min");
  if (!(c.fixture.courant <= 1.0)) throw ConfigError("convergence.courant", "must not exceed 1");
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
  ObjectReader rd(j, "");
  RunConfig c;
  c.mass = rd.positive("mass", c.mass);
  if (rd.has("grid")) c.grid = parse_grid(rd.raw("grid"), "grid", c.grid);
  c.courant = rd.positive("courant", c.courant);
  if (!(c.courant <= 1.0)) throw ConfigError("courant", "must lie in (0, 1]");
  c.t_final = rd.number("t_final", c.t_final);
  if (!(c.t_final >= 0.0)) throw ConfigError("t_final", "must be non-negative");
  if (rd.has("initial_data")) c.initial_data = parse_profile(rd.raw("initial_data"), "initial_data", c.initial_data);
  if (rd.has("modes")) c.modes = parse_modes(rd.raw("modes"), c.initial_data);
  if (rd.has("source")) c.source = parse_source(rd.raw("source"));
  if (rd.has("semilinear")) c.semilinear = parse_semilinear(rd.raw("semilinear"));
  if (rd.has("outputs")) c.outputs = parse_outputs(rd.raw("outputs"));
  if (rd.has("verification")) c.verification = parse_verification(rd.raw("verification"));
  if (rd.has("analysis")) c.analysis = parse_analysis(rd.raw("analysis"));
  if (rd.has("convergence")) c.convergence = parse_convergence(rd.raw("convergence"), c.mass);
  // explicit nulls are accepted for optional blocks
  for (const char* key : {"source", "semilinear", "verification", "convergence", "modes"}) {
    if (j.contains(key)) rd.raw(key);
  }
  rd.finish();
  if (c.semilinear && c.source) throw ConfigError("source", "semilinear runs take no source");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

InitialProfile make_profile(const ProfileConfig& profile, const TortoiseGrid& grid) {
  return gaussian_profile(grid, profile.center, profile.width, profile.amplitude, profile.direction);
}

}  // namespace rwlab
