#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fwr/dnwr.hpp"
#include "fwr/harness.hpp"
#include "fwr/nnwr.hpp"
#include "fwr/theory.hpp"

using namespace fwr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fwr_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  for (const auto& p : problems)
    if (p.find(needle) != std::string::npos) return true;
  return false;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(FWR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal dnwr config") {
  const auto c = parse_config_text(R"({"algorithm": "dnwr"})");
  CHECK(c.algorithm == Algorithm::Dnwr);
  CHECK(c.breakpoints == std::vector<double>{1.0});
  CHECK(c.theta.size() == 1);
  CHECK_FALSE(c.theta[0].has_value());
}

TEST_CASE("full config round trip") {
  const auto c = parse_config_text(R"({
    "name": "sweep",
    "algorithm": "nnwr1d",
    "geometry": {"domain": [0, 16], "breakpoints": [4, 8, 12], "kappa": [1, 0.25, 0.25, 1], "dx": 0.02},
    "time": {"two_nu": 1.5, "T": 4, "steps": 32, "grading": "auto"},
    "relaxation": {"theta": [0.25, "optimal", 0.6]},
    "run": {"tolerance": 1e-9, "max_iter": 7, "mode": "forced", "initial_guess": 0.5, "schedule": "concurrent", "bound": false},
    "problem": {"source": "sin_pi_over_16", "initial": "quadratic_16"},
    "output": {"dir": "somewhere"}
  })");
  CHECK(c.name == "sweep");
  CHECK(c.algorithm == Algorithm::Nnwr1d);
  CHECK(c.kappa.size() == 4);
  CHECK(c.dx == std::vector<double>{0.02});
  CHECK(c.time.order == 1.5);
  CHECK(c.time.horizon == 4.0);
  CHECK(c.time.steps == 32);
  CHECK(c.time.grading == 0.0);
  REQUIRE(c.theta.size() == 3);
  CHECK(*c.theta[0] == 0.25);
  CHECK_FALSE(c.theta[1].has_value());
  CHECK(c.tolerance == 1e-9);
  CHECK(c.max_iter == 7);
  CHECK(c.mode == RunMode::Forced);
  CHECK(*c.initial_guess == 0.5);
  CHECK(c.schedule == Schedule::Concurrent);
  CHECK_FALSE(c.bound);
  CHECK(c.source == "sin_pi_over_16");
  CHECK(c.out_dir == "somewhere");
}

TEST_CASE("config violations carry field paths") {
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "relaxation": {"theta": 1.5}})"), "relaxation.theta[0]: θ must lie in (0,1]"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "geometry": {"breakpoints": [2.5]}})"), "geometry.breakpoints[0]"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "run": {"tolerence": 1e-8}})"), "run.tolerence: unknown key"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "colour": 1})"), "colour: unknown key"));
  CHECK(mentions(problems_of(R"({"geometry": {}})"), "algorithm: required"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "time": {"two_nu": 2.0}})"), "time.two_nu"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "geometry": {"breakpoints": [0.5, 1.0]}})"), "exactly two"));
  CHECK(mentions(problems_of(R"({"algorithm": "nnwr2d", "geometry": {"kappa": [1, 2]}})"), "geometry.kappa"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "geometry": {"dx": 0.3}})"), "geometry"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr", "problem": {"source": "strip_gaussian"}})"), "problem.source"));
  CHECK(mentions(problems_of(R"({"algorithm": "quantum"})"), "algorithm: unknown value"));
  CHECK(mentions(problems_of(R"({"algorithm": "dnwr",)"), "<document>"));
  CHECK(problems_of(R"({"algorithm": "dnwr"})").empty());

  const auto all = problems_of(R"({"algorithm": "dnwr", "relaxation": {"theta": [0, 2]}, "run": {"tolerance": -1}})");
  CHECK(all.size() == 3);
  CHECK_THROWS_AS(parse_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names.size() >= 4);
  for (const auto& n : names) {
    CAPTURE(n);
    for (const auto& c : preset(n)) CHECK(validate(c).empty());
  }
  CHECK_THROWS_AS(preset("nope"), std::invalid_argument);

  const auto t2 = preset("fig_nnwr_table2");
  bool seen[3] = {false, false, false};
  for (const auto& c : t2) {
    const std::size_t n = c.breakpoints.size() + 1;
    if (n == 4) seen[0] = true;
    if (n == 8) seen[1] = true;
    if (n == 12) seen[2] = true;
    for (std::size_t i = 0; i < n; ++i) CHECK(c.kappa[i] == c.kappa[n - 1 - i]);
    CHECK(c.kappa[0] == 1.0);
    CHECK(c.kappa[1] == 0.25);
  }
  CHECK((seen[0] && seen[1] && seen[2]));

  const auto d2 = preset("fig_2d");
  CHECK(d2[0].dx[0] == 0.02);
  CHECK(d2[0].dy == 0.2);
  CHECK(d2[0].breakpoints[0] == 0.5);
}

TEST_CASE("theta sweep preset writes one CSV per value") {
  auto c = preset("fig_dnwr_theta_sweep").at(0);
  c.out_dir = scratch("sweep").string();
  const auto files = run_experiment(c);
  CHECK(files.size() == 6);
  for (const auto& f : files) {
    REQUIRE(fs::exists(f));
    const auto rows = csv_cells(slurp(f));
    REQUIRE(rows.size() >= 2);
    CHECK(slurp(f).substr(0, slurp(f).find('\n')) == csv_header);
    std::size_t last = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      REQUIRE(rows[r].size() == 6);
      const std::size_t k = std::stoul(rows[r][0]);
      if (r > 1) CHECK(k > last);
      last = k;
      CHECK(std::stod(rows[r][2]) >= 0.0);
      CHECK(std::stod(rows[r][5]) == 0.5);
    }
  }
  fs::remove_all(c.out_dir);
}

TEST_CASE("CSV round-trips doubles exactly") {
  const double v = 0.1 + 0.2;
  const auto text = format_csv({{3, 1, v, std::nullopt, 1.0 / 3.0, 0.5}, {4, 2, 1e-300, 2.0 / 3.0, 0.25, 1.5}});
  const auto rows = csv_cells(text);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][3].empty());
  CHECK(std::stod(rows[1][2]) == v);
  CHECK(std::stod(rows[1][4]) == 1.0 / 3.0);
  CHECK(std::stod(rows[2][3]) == 2.0 / 3.0);
  CHECK(std::stod(rows[2][2]) == 1e-300);
}

TEST_CASE("bound column matches direct theory calls") {
  SUBCASE("dnwr") {
    for (double order : {0.5, 1.5}) {
      ExperimentConfig c;
      c.algorithm = Algorithm::Dnwr;
      c.breakpoints = {1.5};
      c.kappa = {1.0, 0.25};
      c.dx = {0.05};
      c.time = TimeSettings{order, 1.0, 16, 0.0};
      c.max_iter = 5;
      c.tolerance = 1e-30;
      const auto out = run_single(c, 0);
      const auto p = make_dnwr_bound_params(order / 2.0, 1.5, 1.0, optimal_theta_dnwr(1.0, 0.25), 1.0);
      std::size_t checked = 0;
      for (const auto& r : out.rows) {
        if (r.k == 0) {
          CHECK_FALSE(r.bound.has_value());
          continue;
        }
        REQUIRE(r.bound.has_value());
        CHECK(*r.bound == dnwr_bound(p, r.k, order < 1.0 ? DnwrCase::Sub : DnwrCase::Wave));
        ++checked;
      }
      CHECK(checked == 5);
    }
  }
  SUBCASE("nnwr") {
    auto c = preset("fig_nnwr_table2").at(1);
    c.max_iter = 4;
    c.time.steps = 16;
    const auto out = run_single(c, 0);
    std::vector<double> widths(4, 4.0);
    const auto p = make_nnwr_bound_params(c.time.order / 2.0, widths, c.kappa, c.time.horizon, out.report.theta);
    for (const auto& r : out.rows) {
      if (r.k == 0) continue;
      const auto b = nnwr_bound(p, r.k);
      REQUIRE(b.has_value());
      REQUIRE(r.bound.has_value());
      CHECK(*r.bound == *b);
    }
  }
  SUBCASE("non-optimal theta has no bound") {
    ExperimentConfig c;
    c.theta = {0.3};
    c.max_iter = 3;
    c.dx = {0.05};
    c.time.steps = 8;
    for (const auto& r : run_single(c, 0).rows) CHECK_FALSE(r.bound.has_value());
  }
}

TEST_CASE("runs are byte-reproducible and schedule independent") {
  auto c = preset("fig_nnwr_theta_sweep").at(0);
  c.theta = {0.25, 0.6};
  c.max_iter = 6;
  c.time.steps = 16;
  c.out_dir = scratch("rep_a").string();
  const auto a = run_experiment(c);
  c.out_dir = scratch("rep_b").string();
  c.schedule = Schedule::Concurrent;
  const auto b = run_experiment(c);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].filename() == b[i].filename());
    CHECK(slurp(a[i]) == slurp(b[i]));
  }
  fs::remove_all(a[0].parent_path());
  fs::remove_all(b[0].parent_path());
}

TEST_CASE("partial output is removed on failure") {
  ExperimentConfig c;
  c.name = "partial";
  c.theta = {0.5, 0.3};
  c.dx = {0.1};
  c.time.steps = 8;
  c.max_iter = 2;
  c.out_dir = scratch("partial").string();
  // A directory squatting on the second file name makes the write fail.
  fs::create_directories(fs::path(c.out_dir) / "partial_theta_0.3.csv" / "x");
  CHECK_THROWS(run_experiment(c));
  CHECK_FALSE(fs::exists(fs::path(c.out_dir) / "partial_theta_0.5.csv"));
  fs::remove_all(c.out_dir);
}

TEST_CASE("forced and monolithic runs") {
  ExperimentConfig c;
  c.algorithm = Algorithm::Monolithic;
  c.name = "mono";
  c.source = "sin_half_pi";
  c.dx = {0.05};
  c.time.steps = 16;
  const auto m = run_single(c, 0);
  REQUIRE(m.rows.size() == 1);
  CHECK(m.rows[0].error_sup > 0.0);

  c.algorithm = Algorithm::Dnwr;
  c.mode = RunMode::Forced;
  c.tolerance = 1e-10;
  c.max_iter = 30;
  const auto d = run_single(c, 0);
  CHECK(d.report.converged);
  for (const auto& r : d.rows) CHECK_FALSE(r.bound.has_value());
}

TEST_CASE("seed check passes") {
  std::ostringstream out;
  CHECK(seed_check(out) == 0);
  CHECK(out.str().find("FAIL") == std::string::npos);
}

TEST_CASE("command line exit codes") {
  CHECK(cli("") == 0);
  CHECK(cli("--list-presets") == 0);
  CHECK(cli("--config /nonexistent/missing.json") == 1);
  CHECK(cli("--preset no_such_preset") == 1);
  CHECK(cli("--bogus-flag") == 1);

  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << R"({"algorithm": "dnwr", "relaxation": {"theta": 1.5}})";
    std::ofstream(dir / "ok.json") << R"({"name": "tiny", "algorithm": "dnwr", "geometry": {"dx": 0.1}, "time": {"steps": 8}})";
  }
  CHECK(cli("--config " + (dir / "bad.json").string()) == 1);
  CHECK(cli("--config " + (dir / "ok.json").string() + " --out " + (dir / "o").string() + " --tol 1e-6 --max-iter 3") == 0);
  CHECK(fs::exists(dir / "o" / "tiny_theta_opt.csv"));
  CHECK(cli("--preset fig_dnwr_theta_sweep --out " + (dir / "sweep").string()) == 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir / "sweep")) n += e.path().extension() == ".csv";
  CHECK(n == 6);
  fs::remove_all(dir);
}
