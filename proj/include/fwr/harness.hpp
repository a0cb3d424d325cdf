#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwr/fractional_time.hpp"
#include "fwr/geometry.hpp"
#include "fwr/iteration.hpp"

namespace fwr {

enum class Algorithm { Dnwr, Nnwr1d, Nnwr2d, Monolithic };

/// Every schema violation found while reading a config, each prefixed with
/// its field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// One entry of the relaxation sweep; nullopt means the optimal value(s).
using ThetaChoice = std::optional<double>;

struct ExperimentConfig {
  std::string name = "run";
  Algorithm algorithm = Algorithm::Dnwr;

  Interval domain{0.0, 2.0};
  std::vector<double> breakpoints{1.0};
  std::vector<double> kappa{1.0};
  std::vector<double> dx{0.02};
  Interval y{-5.0, 5.0};  // nnwr2d only
  double dy = 0.2;

  TimeSettings time;  // grading 0 means the default for the order

  std::vector<ThetaChoice> theta{std::nullopt};

  double tolerance = 1e-10;
  std::size_t max_iter = 20;
  RunMode mode = RunMode::ErrorEquation;
  std::optional<double> initial_guess;  // constant interface guess
  Schedule schedule = Schedule::Sequential;
  bool bound = true;

  // Named data for forced runs, see problem_names().
  std::string source = "zero";
  std::string initial = "zero";

  std::string out_dir = "out";
};

/// Names accepted for problem.source and problem.initial.
std::vector<std::string> problem_names();

/// Reads the JSON config format documented in README.md. Throws ConfigError.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Cross-field checks; returns the problems found (empty when valid).
std::vector<std::string> validate(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
/// Throws std::invalid_argument for an unknown name.
std::vector<ExperimentConfig> preset(const std::string& name);

struct CsvRow {
  std::size_t k = 0;
  std::size_t interface_id = 0;
  double error_sup = 0.0;
  std::optional<double> bound;
  double theta = 0.0;
  double two_nu = 0.0;
};

inline constexpr const char* csv_header = "k,interface_id,error_sup,bound,theta,two_nu";

struct RunOutput {
  std::string label;  // file stem
  std::vector<CsvRow> rows;
  IterationReport report;
};

/// Runs one member of the theta sweep.
RunOutput run_single(const ExperimentConfig& cfg, std::size_t theta_index);

std::string format_csv(const std::vector<CsvRow>& rows);

/// One CSV per theta entry under out_dir. On failure every file written by
/// this call is removed before the exception propagates.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg);

/// Quick oracle and property checks; prints one line per check and returns
/// the number of failures.
int seed_check(std::ostream& out);

}  // namespace fwr
