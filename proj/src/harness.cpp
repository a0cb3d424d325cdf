#include "fwr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fwr/dnwr.hpp"
#include "fwr/errors.hpp"
#include "fwr/nnwr.hpp"
#include "fwr/subdomain_solver.hpp"
#include "fwr/theory.hpp"

namespace fwr {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

// Walks one JSON object, collecting problems instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void fail(const std::string& path, const std::string& what) { problems_.push_back(path + ": " + what); }

  bool object(const json& j, const std::string& path, const std::set<std::string>& keys) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items())
      if (!keys.count(k)) fail(path.empty() ? k : path + "." + k, "unknown key");
    return true;
  }

  void number(const json& j, const std::string& path, double& out) {
    if (!j.is_number()) return fail(path, "expected a number");
    out = j.get<double>();
  }

  void count(const json& j, const std::string& path, std::size_t& out) {
    if (!j.is_number_integer() || j.get<long long>() < 0) return fail(path, "expected a non-negative integer");
    out = j.get<std::size_t>();
  }

  void text(const json& j, const std::string& path, std::string& out) {
    if (!j.is_string()) return fail(path, "expected a string");
    out = j.get<std::string>();
  }

  void flag(const json& j, const std::string& path, bool& out) {
    if (!j.is_boolean()) return fail(path, "expected true or false");
    out = j.get<bool>();
  }

  // A number is accepted as a one-element list.
  void list(const json& j, const std::string& path, std::vector<double>& out) {
    if (j.is_number()) {
      out = {j.get<double>()};
      return;
    }
    if (!j.is_array()) return fail(path, "expected a number or a list of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) {
        fail(path + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      v.push_back(j[i].get<double>());
    }
    out = std::move(v);
  }

  void interval(const json& j, const std::string& path, Interval& out) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      return fail(path, "expected [lo, hi]");
    out = {j[0].get<double>(), j[1].get<double>()};
  }

 private:
  std::vector<std::string>& problems_;
};

template <class T>
void pick(Reader& r, const json& j, const std::string& path, T& out, const std::map<std::string, T>& names) {
  std::string s;
  if (!j.is_string()) return r.fail(path, "expected a string");
  s = j.get<std::string>();
  auto it = names.find(s);
  if (it == names.end()) {
    std::string opts;
    for (const auto& [k, v] : names) opts += (opts.empty() ? "" : ", ") + k;
    return r.fail(path, "unknown value \"" + s + "\" (expected one of " + opts + ")");
  }
  out = it->second;
}

const std::map<std::string, Algorithm> algorithm_names{
    {"dnwr", Algorithm::Dnwr}, {"nnwr1d", Algorithm::Nnwr1d}, {"nnwr2d", Algorithm::Nnwr2d}, {"monolithic", Algorithm::Monolithic}};

const std::map<std::string, RunMode> mode_names{{"error_equation", RunMode::ErrorEquation}, {"forced", RunMode::Forced}};

const std::map<std::string, Schedule> schedule_names{{"sequential", Schedule::Sequential},
                                                     {"concurrent", Schedule::Concurrent}};

using Profile2D = double (*)(double, double);
constexpr double pi = std::numbers::pi;

const std::map<std::string, Profile2D> profiles{
    {"zero", [](double, double) { return 0.0; }},
    {"sin_half_pi", [](double x, double) { return std::sin(pi * x / 2.0); }},
    {"sin_pi_over_16", [](double x, double) { return std::sin(pi * x / 16.0); }},
    {"quadratic_2", [](double x, double) { return x * (2.0 - x); }},
    {"quadratic_16", [](double x, double) { return x * (16.0 - x) / 64.0; }},
    {"strip_gaussian", [](double x, double y) { return x * (2.0 - x) * std::exp(-10.0 * y * y); }},
};

std::size_t subdomain_count(const ExperimentConfig& c) { return c.breakpoints.size() + 1; }

Partition1D partition_of(const ExperimentConfig& c) { return build_partition(c.domain, c.breakpoints, c.kappa, c.dx); }

double optimal_theta(const ExperimentConfig& c, std::size_t iface) {
  auto kap = [&](std::size_t i) { return c.kappa.size() == 1 ? c.kappa[0] : c.kappa[i]; };
  switch (c.algorithm) {
    case Algorithm::Dnwr: return optimal_theta_dnwr(kap(0), kap(1));
    case Algorithm::Nnwr1d: return optimal_theta_nnwr(kap(iface), kap(iface + 1));
    case Algorithm::Nnwr2d: return 0.25;
    case Algorithm::Monolithic: return 0.0;
  }
  return 0.0;
}

std::string theta_label(const ThetaChoice& t) {
  if (!t) return "opt";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", *t);
  return buf;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid config: " + join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> problem_names() {
  std::vector<std::string> v;
  for (const auto& [k, f] : profiles) v.push_back(k);
  return v;
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& path, const std::string& what) { bad.push_back(path + ": " + what); };

  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    fail("name", "must be a non-empty file stem");
  if (!(c.domain.lo < c.domain.hi)) fail("geometry.domain", "need lo < hi");
  for (std::size_t i = 0; i < c.breakpoints.size(); ++i) {
    const double b = c.breakpoints[i];
    const double prev = i == 0 ? c.domain.lo : c.breakpoints[i - 1];
    if (!(b > prev && b < c.domain.hi))
      fail("geometry.breakpoints[" + std::to_string(i) + "]", "must lie inside the domain in increasing order");
  }
  const std::size_t n = subdomain_count(c);
  if (c.kappa.size() != 1 && c.kappa.size() != n) fail("geometry.kappa", "give one value or one per subdomain");
  for (std::size_t i = 0; i < c.kappa.size(); ++i)
    if (!(c.kappa[i] > 0.0)) fail("geometry.kappa[" + std::to_string(i) + "]", "must be positive");
  if (c.dx.size() != 1 && c.dx.size() != n) fail("geometry.dx", "give one value or one per subdomain");
  for (std::size_t i = 0; i < c.dx.size(); ++i)
    if (!(c.dx[i] > 0.0)) fail("geometry.dx[" + std::to_string(i) + "]", "must be positive");

  switch (c.algorithm) {
    case Algorithm::Dnwr:
      if (c.breakpoints.size() != 1) fail("geometry.breakpoints", "dnwr needs exactly two subdomains");
      break;
    case Algorithm::Nnwr1d:
      if (c.breakpoints.empty()) fail("geometry.breakpoints", "nnwr1d needs at least two subdomains");
      break;
    case Algorithm::Nnwr2d:
      if (c.breakpoints.size() != 1) fail("geometry.breakpoints", "nnwr2d needs exactly two subdomains");
      if (c.kappa.size() != 1) fail("geometry.kappa", "nnwr2d takes a single coefficient");
      if (c.dx.size() != 1) fail("geometry.dx", "nnwr2d takes a single step");
      if (!(c.y.lo < c.y.hi)) fail("geometry.y", "need lo < hi");
      if (!(c.dy > 0.0)) fail("geometry.dy", "must be positive");
      break;
    case Algorithm::Monolithic: break;
  }
  if (bad.empty() && c.algorithm != Algorithm::Nnwr2d) {
    try {
      partition_of(c);
    } catch (const std::invalid_argument& e) {
      fail("geometry", e.what());
    }
  }

  if (!(c.time.order > 0.0 && c.time.order < 2.0)) fail("time.two_nu", "must lie in (0,2)");
  if (!(c.time.horizon > 0.0)) fail("time.T", "must be positive");
  if (c.time.steps < 1) fail("time.steps", "must be at least 1");
  if (!(c.time.grading == 0.0 || c.time.grading >= 1.0)) fail("time.grading", "must be \"auto\" or >= 1");

  if (c.theta.empty()) fail("relaxation.theta", "empty sweep");
  for (std::size_t i = 0; i < c.theta.size(); ++i)
    if (c.theta[i] && !(*c.theta[i] > 0.0 && *c.theta[i] <= 1.0))
      fail("relaxation.theta[" + std::to_string(i) + "]", "θ must lie in (0,1]");

  if (!(c.tolerance > 0.0)) fail("run.tolerance", "must be positive");
  if (c.max_iter < 1) fail("run.max_iter", "must be at least 1");
  if (c.initial_guess && !std::isfinite(*c.initial_guess)) fail("run.initial_guess", "must be finite");

  const bool planar = c.algorithm == Algorithm::Nnwr2d;
  for (const auto& [path, name] : {std::pair{"problem.source", c.source}, std::pair{"problem.initial", c.initial}}) {
    if (!profiles.count(name)) fail(path, "unknown profile \"" + name + "\"");
    else if (name == "strip_gaussian" && !planar) fail(path, "strip_gaussian needs nnwr2d");
  }
  if (c.out_dir.empty()) fail("output.dir", "must not be empty");
  return bad;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::vector<std::string> bad;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<document>: ") + e.what()});
  }
  Reader r(bad);
  ExperimentConfig c;
  if (!r.object(root, "", {"name", "algorithm", "geometry", "time", "relaxation", "run", "problem", "output"}))
    throw ConfigError(bad);

  if (root.contains("name")) r.text(root["name"], "name", c.name);
  if (root.contains("algorithm")) pick(r, root["algorithm"], "algorithm", c.algorithm, algorithm_names);
  else r.fail("algorithm", "required");

  if (root.contains("geometry")) {
    const json& g = root["geometry"];
    if (r.object(g, "geometry", {"domain", "breakpoints", "kappa", "dx", "y", "dy"})) {
      if (g.contains("domain")) r.interval(g["domain"], "geometry.domain", c.domain);
      if (g.contains("breakpoints")) r.list(g["breakpoints"], "geometry.breakpoints", c.breakpoints);
      if (g.contains("kappa")) r.list(g["kappa"], "geometry.kappa", c.kappa);
      if (g.contains("dx")) r.list(g["dx"], "geometry.dx", c.dx);
      if (g.contains("y")) r.interval(g["y"], "geometry.y", c.y);
      if (g.contains("dy")) r.number(g["dy"], "geometry.dy", c.dy);
    }
  }

  if (root.contains("time")) {
    const json& t = root["time"];
    if (r.object(t, "time", {"two_nu", "T", "steps", "grading"})) {
      if (t.contains("two_nu")) r.number(t["two_nu"], "time.two_nu", c.time.order);
      if (t.contains("T")) r.number(t["T"], "time.T", c.time.horizon);
      if (t.contains("steps")) r.count(t["steps"], "time.steps", c.time.steps);
      if (t.contains("grading")) {
        if (t["grading"] == "auto") c.time.grading = 0.0;
        else if (t["grading"].is_number()) {
          c.time.grading = t["grading"].get<double>();
          if (c.time.grading == 0.0) r.fail("time.grading", "must be \"auto\" or >= 1");
        } else r.fail("time.grading", "expected \"auto\" or a number");
      }
    }
  }

  if (root.contains("relaxation")) {
    const json& x = root["relaxation"];
    if (r.object(x, "relaxation", {"theta"}) && x.contains("theta")) {
      const json& t = x["theta"];
      auto one = [&](const json& v, const std::string& path) -> std::optional<ThetaChoice> {
        if (v == "optimal") return ThetaChoice{};
        if (v.is_number()) return ThetaChoice{v.get<double>()};
        r.fail(path, "expected a number or \"optimal\"");
        return std::nullopt;
      };
      c.theta.clear();
      if (t.is_array()) {
        for (std::size_t i = 0; i < t.size(); ++i)
          if (auto v = one(t[i], "relaxation.theta[" + std::to_string(i) + "]")) c.theta.push_back(*v);
      } else if (auto v = one(t, "relaxation.theta")) {
        c.theta.push_back(*v);
      }
    }
  }

  if (root.contains("run")) {
    const json& x = root["run"];
    if (r.object(x, "run", {"tolerance", "max_iter", "mode", "initial_guess", "schedule", "bound"})) {
      if (x.contains("tolerance")) r.number(x["tolerance"], "run.tolerance", c.tolerance);
      if (x.contains("max_iter")) r.count(x["max_iter"], "run.max_iter", c.max_iter);
      if (x.contains("mode")) pick(r, x["mode"], "run.mode", c.mode, mode_names);
      if (x.contains("initial_guess")) {
        double v = 0.0;
        r.number(x["initial_guess"], "run.initial_guess", v);
        c.initial_guess = v;
      }
      if (x.contains("schedule")) pick(r, x["schedule"], "run.schedule", c.schedule, schedule_names);
      if (x.contains("bound")) r.flag(x["bound"], "run.bound", c.bound);
    }
  }

  if (root.contains("problem")) {
    const json& x = root["problem"];
    if (r.object(x, "problem", {"source", "initial"})) {
      if (x.contains("source")) r.text(x["source"], "problem.source", c.source);
      if (x.contains("initial")) r.text(x["initial"], "problem.initial", c.initial);
    }
  }

  if (root.contains("output")) {
    const json& x = root["output"];
    if (r.object(x, "output", {"dir"}) && x.contains("dir")) r.text(x["dir"], "output.dir", c.out_dir);
  }

  if (bad.empty()) bad = validate(c);
  if (!bad.empty()) throw ConfigError(bad);
  return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Presets. Grids are coarser than the full-size experiments so that every
// preset finishes in seconds; the original values are noted beside each one.

namespace {

ExperimentConfig dnwr_base() {
  ExperimentConfig c;
  c.algorithm = Algorithm::Dnwr;
  c.domain = {0.0, 2.0};
  c.dx = {0.01};
  c.time = TimeSettings{0.5, 1.0, 64, 0.0};
  c.tolerance = 1e-12;
  c.max_iter = 25;
  c.source = "sin_half_pi";
  return c;
}

std::string order_tag(double order) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_2nu%g", order);
  return buf;
}

// kappa_i = 4^{-(i-1)} on the outer half, mirrored onto the inner half.
std::vector<double> mirrored_kappas(std::size_t n) {
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n / 2; ++i) k[i] = k[n - 1 - i] = std::pow(4.0, -static_cast<double>(i));
  return k;
}

std::vector<double> equal_breakpoints(Interval d, std::size_t n) {
  std::vector<double> b;
  for (std::size_t i = 1; i < n; ++i) b.push_back(d.lo + d.length() * static_cast<double>(i) / static_cast<double>(n));
  return b;
}

// Steps proportional to sqrt(kappa) keep the discrete interface operator
// close to the continuous one when the coefficients jump. Each step is
// rounded so that it divides its subdomain.
std::vector<double> scaled_steps(double dx, const ExperimentConfig& c) {
  std::vector<double> out;
  for (std::size_t i = 0; i < c.kappa.size(); ++i) {
    const double lo = i == 0 ? c.domain.lo : c.breakpoints[i - 1];
    const double hi = i == c.breakpoints.size() ? c.domain.hi : c.breakpoints[i];
    out.push_back((hi - lo) / std::max(1.0, std::round((hi - lo) / (dx * std::sqrt(c.kappa[i])))));
  }
  return out;
}

const std::vector<double> all_orders{0.2, 0.5, 0.8, 1.2, 1.5, 1.8};

std::vector<ExperimentConfig> make_preset(const std::string& name) {
  std::vector<ExperimentConfig> out;
  if (name == "fig_dnwr_theta_sweep") {
    // a = b = 1, kappa = 1; dx 0.01 and 2^6 steps, full size.
    auto c = dnwr_base();
    c.name = name;
    c.breakpoints = {1.0};
    c.theta = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    out.push_back(c);
  } else if (name == "fig_dnwr_orders") {
    // a = 0.5, b = 1.5, theta = 0.33, all six orders.
    for (double order : all_orders) {
      auto c = dnwr_base();
      c.name = name + order_tag(order);
      c.breakpoints = {0.5};
      c.time.order = order;
      c.theta = {0.33};
      c.tolerance = 1e-10;
      c.max_iter = 40;
      out.push_back(c);
    }
  } else if (name == "fig_dnwr_bounds") {
    // kappa = (1, 0.25) with dx = (0.01, 0.005); A = 1.5, B = 1 and the
    // swapped geometry A = 0.5, B = 3.
    for (double a : {1.5, 0.5})
      for (double order : all_orders) {
        auto c = dnwr_base();
        c.name = name + (a > 1.0 ? "_a_gt_b" : "_a_lt_b") + order_tag(order);
        c.breakpoints = {a};
        c.kappa = {1.0, 0.25};
        c.dx = {0.01, 0.005};
        c.time.order = order;
        c.max_iter = 10;
        out.push_back(c);
      }
  } else if (name == "fig_nnwr_theta_sweep") {
    // Five subdomains of (0,16), T = 4. Full size: dx 0.01, dt 0.015.
    for (bool equal : {true, false})
      for (double order : {0.5, 1.5}) {
        ExperimentConfig c;
        c.algorithm = Algorithm::Nnwr1d;
        c.name = name + (equal ? "_equal" : "_unequal") + order_tag(order);
        c.domain = {0.0, 16.0};
        c.breakpoints = equal ? equal_breakpoints(c.domain, 5) : std::vector<double>{3.5, 5.5, 10.0, 12.0};
        c.dx = {0.02};
        c.time = TimeSettings{order, 4.0, 64, 0.0};
        c.theta = {0.25, 0.4, 0.6, 0.8};
        c.tolerance = 1e-12;
        c.max_iter = 20;
        c.source = "sin_pi_over_16";
        c.initial = "quadratic_16";
        out.push_back(c);
      }
  } else if (name == "fig_nnwr_kappa") {
    // kappa = (0.25, 1, 0.25, 4, 1) on equal and unequal subdomains.
    const std::vector<double> kappa{0.25, 1.0, 0.25, 4.0, 1.0};
    for (bool equal : {true, false})
      for (double order : all_orders) {
        ExperimentConfig c;
        c.algorithm = Algorithm::Nnwr1d;
        c.name = name + (equal ? "_equal" : "_unequal") + order_tag(order);
        c.domain = {0.0, 16.0};
        c.breakpoints = equal ? equal_breakpoints(c.domain, 5) : std::vector<double>{3.5, 5.5, 10.0, 12.0};
        c.kappa = kappa;
        c.dx = scaled_steps(0.02, c);
        c.time = TimeSettings{order, 4.0, 64, 0.0};
        c.tolerance = 1e-12;
        c.max_iter = 20;
        c.source = "sin_pi_over_16";
        c.initial = "quadratic_16";
        out.push_back(c);
      }
  } else if (name == "fig_nnwr_table2") {
    // Equal subdomains of (0,16), mirrored coefficients; sub-diffusion at
    // T = 1 and diffusion-wave at T = 4.
    for (std::size_t n : {4, 8, 12})
      for (double order : all_orders) {
        ExperimentConfig c;
        c.algorithm = Algorithm::Nnwr1d;
        c.name = name + "_N" + std::to_string(n) + order_tag(order);
        c.domain = {0.0, 16.0};
        c.breakpoints = equal_breakpoints(c.domain, n);
        c.kappa = mirrored_kappas(n);
        c.dx = scaled_steps(0.02, c);
        c.time = TimeSettings{order, order < 1.0 ? 1.0 : 4.0, 64, 0.0};
        c.tolerance = 1e-12;
        c.max_iter = 15;
        c.source = "sin_pi_over_16";
        c.initial = "quadratic_16";
        out.push_back(c);
      }
  } else if (name == "fig_2d") {
    // (0,2) x (-5,5) split at x = 0.5. Full size: dx 0.01, dy 0.1, 2^8 steps.
    for (double order : all_orders) {
      ExperimentConfig c;
      c.algorithm = Algorithm::Nnwr2d;
      c.name = name + order_tag(order);
      c.domain = {0.0, 2.0};
      c.breakpoints = {0.5};
      c.dx = {0.02};
      c.y = {-5.0, 5.0};
      c.dy = 0.2;
      c.time = TimeSettings{order, 1.0, 64, 0.0};
      c.tolerance = 1e-12;
      c.max_iter = 8;
      c.initial = "strip_gaussian";
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig_dnwr_theta_sweep", "fig_dnwr_orders", "fig_dnwr_bounds", "fig_nnwr_theta_sweep",
          "fig_nnwr_kappa",       "fig_nnwr_table2", "fig_2d"};
}

std::vector<ExperimentConfig> preset(const std::string& name) {
  auto v = make_preset(name);
  if (v.empty()) throw std::invalid_argument("unknown preset \"" + name + "\"");
  return v;
}

// ---------------------------------------------------------------------------

RunOutput run_single(const ExperimentConfig& cfg, std::size_t index) {
  if (auto bad = validate(cfg); !bad.empty()) throw ConfigError(bad);
  if (index >= cfg.theta.size()) throw std::invalid_argument("run_single: theta index out of range");

  const ThetaChoice choice = cfg.theta[index];
  const double nu = cfg.time.order / 2.0;
  const Profile2D src = profiles.at(cfg.source);
  const Profile2D init = profiles.at(cfg.initial);
  const bool forced = cfg.mode == RunMode::Forced;

  RunOutput out;
  out.label = cfg.algorithm == Algorithm::Monolithic ? cfg.name : cfg.name + "_theta_" + theta_label(choice);

  // The estimates assume the optimal relaxation and the error equations.
  auto optimal_run = [&](std::size_t ifaces) {
    if (!cfg.bound || forced) return false;
    if (!choice) return true;
    for (std::size_t i = 0; i < ifaces; ++i)
      if (std::abs(*choice - optimal_theta(cfg, i)) > 1e-12) return false;
    return true;
  };

  auto emit = [&](const IterationReport& rep, auto bound_at) {
    for (std::size_t i = 0; i < rep.interfaces(); ++i)
      out.rows.push_back({0, i + 1, rep.initial_error[i], std::nullopt, rep.theta[i], cfg.time.order});
    for (std::size_t k = 1; k <= rep.iterations; ++k)
      for (std::size_t i = 0; i < rep.interfaces(); ++i) {
        const double e = rep.error[k - 1][i];
        if (!std::isfinite(e)) throw NumericalError("non-finite interface error at iteration " + std::to_string(k));
        out.rows.push_back({k, i + 1, e, bound_at(k), rep.theta[i], cfg.time.order});
      }
    out.report = rep;
  };

  const SourceTerm source1 = [src](double x, double) { return src(x, 0.0); };
  const InitialProfile initial1 = [init](double x) { return init(x, 0.0); };

  switch (cfg.algorithm) {
    case Algorithm::Dnwr: {
      DnwrConfig d;
      d.partition = partition_of(cfg);
      d.time = cfg.time;
      d.theta = choice ? *choice : optimal_theta(cfg, 0);
      d.tolerance = cfg.tolerance;
      d.max_iter = cfg.max_iter;
      d.mode = cfg.mode;
      if (cfg.initial_guess) d.initial_guess.assign(cfg.time.steps, *cfg.initial_guess);
      d.source = source1;
      d.initial = initial1;
      const auto r = run_dnwr(d);
      std::optional<DnwrBoundParams> p;
      if (optimal_run(1)) {
        const auto& s = d.partition;
        p = make_dnwr_bound_params(nu, s[0].length() / std::sqrt(s[0].kappa()), s[1].length() / std::sqrt(s[1].kappa()),
                                   optimal_theta(cfg, 0), cfg.time.horizon);
      }
      const double w0 = r.report.initial_error[0];
      emit(r.report, [&](std::size_t k) -> std::optional<double> {
        if (!p) return std::nullopt;
        return w0 * dnwr_bound(*p, k, nu <= 0.5 ? DnwrCase::Sub : DnwrCase::Wave);
      });
      break;
    }
    case Algorithm::Nnwr1d: {
      NnwrConfig d;
      d.partition = partition_of(cfg);
      d.time = cfg.time;
      if (choice) d.theta = {*choice};
      d.tolerance = cfg.tolerance;
      d.max_iter = cfg.max_iter;
      d.mode = cfg.mode;
      if (cfg.initial_guess) d.initial_guess = {std::vector<double>(cfg.time.steps, *cfg.initial_guess)};
      d.source = source1;
      d.initial = initial1;
      d.schedule = cfg.schedule;
      const auto r = run_nnwr_1d(d);
      std::optional<NnwrBoundParams> p;
      if (optimal_run(r.report.interfaces())) {
        std::vector<double> widths, kappas;
        for (std::size_t i = 0; i < d.partition.count(); ++i) {
          widths.push_back(d.partition[i].length());
          kappas.push_back(d.partition[i].kappa());
        }
        p = make_nnwr_bound_params(nu, widths, kappas, cfg.time.horizon, r.report.theta);
      }
      const double w0 = *std::max_element(r.report.initial_error.begin(), r.report.initial_error.end());
      emit(r.report, [&](std::size_t k) -> std::optional<double> {
        if (!p) return std::nullopt;
        auto b = nnwr_bound(*p, k);
        if (!b) return std::nullopt;
        return w0 * *b;
      });
      break;
    }
    case Algorithm::Nnwr2d: {
      Nnwr2dConfig d;
      d.x = cfg.domain;
      d.split = cfg.breakpoints[0];
      d.y = cfg.y;
      d.kappa = cfg.kappa[0];
      d.dx = cfg.dx[0];
      d.dy = cfg.dy;
      d.time = cfg.time;
      d.theta = choice ? *choice : 0.25;
      d.tolerance = cfg.tolerance;
      d.max_iter = cfg.max_iter;
      d.mode = cfg.mode;
      d.source = [src](double x, double y, double) { return src(x, y); };
      d.initial = [init](double x, double y) { return init(x, y); };
      d.schedule = cfg.schedule;
      if (cfg.initial_guess) {
        const std::size_t ny = static_cast<std::size_t>(std::llround(cfg.y.length() / cfg.dy)) + 1;
        d.initial_guess = LineTrace(cfg.time.steps, ny);
        for (std::size_t n = 1; n <= cfg.time.steps; ++n)
          for (std::size_t j = 1; j + 1 < ny; ++j) d.initial_guess.at(n, j) = *cfg.initial_guess;
      }
      const auto r = run_nnwr_2d(d);
      std::optional<Nnwr2dBoundParams> p;
      if (optimal_run(1)) {
        const double sk = std::sqrt(d.kappa);
        p = make_nnwr2d_bound_params(nu, (d.split - d.x.lo) / sk, (d.x.hi - d.split) / sk, cfg.time.horizon);
      }
      const double w0 = r.report.initial_error[0];
      emit(r.report, [&](std::size_t k) -> std::optional<double> {
        if (!p) return std::nullopt;
        auto b = nnwr2d_bound(*p, k);
        if (!b) return std::nullopt;
        return w0 * *b;
      });
      break;
    }
    case Algorithm::Monolithic: {
      // Sup norm of the reference solution on each interface.
      const auto part = partition_of(cfg);
      const auto fields = solve_monolithic(part, build_weights(cfg.time), source1, {}, {}, initial1);
      for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
        const double v = sup_norm(end_trace(fields[i], Side::Right));
        if (!std::isfinite(v)) throw NumericalError("non-finite monolithic solution");
        out.rows.push_back({0, i + 1, v, std::nullopt, 0.0, cfg.time.order});
      }
      break;
    }
  }
  return out;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string s = std::string(csv_header) + "\n";
  char buf[160];
  for (const auto& r : rows) {
    char bound[40] = "";
    if (r.bound) std::snprintf(bound, sizeof bound, "%.17g", *r.bound);
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%s,%.17g,%.17g\n", r.k, r.interface_id, r.error_sup, bound, r.theta,
                  r.two_nu);
    s += buf;
  }
  return s;
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  if (auto bad = validate(cfg); !bad.empty()) throw ConfigError(bad);
  fs::create_directories(cfg.out_dir);
  std::vector<fs::path> written;
  const std::size_t runs = cfg.algorithm == Algorithm::Monolithic ? 1 : cfg.theta.size();
  try {
    for (std::size_t j = 0; j < runs; ++j) {
      const RunOutput r = run_single(cfg, j);
      const fs::path path = fs::path(cfg.out_dir) / (r.label + ".csv");
      written.push_back(path);
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      f << format_csv(r.rows);
      f.close();
      if (!f) throw std::runtime_error("cannot write " + path.string());
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
  return written;
}

// ---------------------------------------------------------------------------

int seed_check(std::ostream& out) {
  int failures = 0;
  auto report = [&](const std::string& what, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };
  auto guarded = [&](const std::string& what, auto check) {
    try {
      report(what, check());
    } catch (const std::exception& e) {
      report(what + " (" + e.what() + ")", false);
    }
  };

  guarded("M-Wright at 1/2 is a half Gaussian", [] {
    for (double x : {0.1, 1.0, 2.5})
      if (std::abs(mwright(0.5, x) - std::exp(-x * x / 4.0) / std::sqrt(pi)) > 1e-8) return false;
    return true;
  });
  guarded("Talbot inversion of 1/(s+1)", [] {
    return std::abs(talbot_invert([](std::complex<double> s) { return 1.0 / (s + 1.0); }, 1.0) - std::exp(-1.0)) < 1e-8;
  });
  guarded("L1 weights grow towards the current level", [] {
    const auto w = build_weights(TimeSettings{0.5, 1.0, 16, 1.0});
    const auto b = w.row(16);
    for (std::size_t j = 1; j < b.size(); ++j)
      if (!(b[j] > b[j - 1] && b[j - 1] > 0.0)) return false;
    return true;
  });
  guarded("DNWR two-step convergence for a symmetric split", [] {
    const double bp[] = {1.0}, kap[] = {1.0}, dx[] = {0.05};
    DnwrConfig d;
    d.partition = build_partition({0.0, 2.0}, bp, kap, dx);
    d.time = TimeSettings{0.5, 1.0, 16, 0.0};
    d.theta = 0.5;
    d.max_iter = 2;
    d.tolerance = 1e-300;
    const auto r = run_dnwr(d);
    return r.report.max_error(2) <= 1e-12;
  });
  guarded("NNWR schedules agree bitwise", [] {
    const double bp[] = {0.5, 1.2}, kap[] = {1.0, 0.5, 2.0}, dx[] = {0.05};
    NnwrConfig d;
    d.partition = build_partition({0.0, 2.0}, bp, kap, dx);
    d.time = TimeSettings{1.5, 1.0, 16, 0.0};
    d.max_iter = 4;
    d.tolerance = 1e-300;
    const auto a = run_nnwr_1d(d);
    d.schedule = Schedule::Concurrent;
    const auto b = run_nnwr_1d(d);
    return a.report.error == b.report.error;
  });
  guarded("kernel positivity", [] {
    const std::vector<double> t{0.05, 0.2, 0.5, 1.0};
    return kernel_positivity_check(KernelKind::Phi, 0.5, 0.5, 1.0, t).min_value >= -1e-8;
  });
  return failures;
}

}  // namespace fwr
