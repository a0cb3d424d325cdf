#pragma once

#include <vector>

#include "fwr/field.hpp"
#include "fwr/fractional_time.hpp"
#include "fwr/geometry.hpp"
#include "fwr/iteration.hpp"
#include "fwr/subdomain_solver_2d.hpp"

namespace fwr {

/// 1/(2 + sqrt(kappa_i/kappa_{i+1}) + sqrt(kappa_{i+1}/kappa_i)).
double optimal_theta_nnwr(double kappa_left, double kappa_right);

struct NnwrConfig {
  Partition1D partition;  // at least two subdomains
  TimeSettings time;
  /// One value per interface, a single value for all, or empty for the
  /// optimal value of each interface.
  std::vector<double> theta;
  double tolerance = 1e-10;
  std::size_t max_iter = 30;
  RunMode mode = RunMode::ErrorEquation;
  /// One trace per interface, a single trace for all, or empty for
  /// 1 (error equations) / 0 (forced).
  std::vector<std::vector<double>> initial_guess;
  SourceTerm source;
  InitialProfile initial;
  Schedule schedule = Schedule::Sequential;
  bool keep_history = false;
};

struct NnwrResult {
  IterationReport report;
  /// With keep_history: iterates[k][i] = h_i^(k), k = 0..iterations.
  std::vector<std::vector<std::vector<double>>> iterates;
  /// Sup over time of the assembled flux mismatch, [k-1][interface].
  std::vector<std::vector<double>> mismatch;
  /// Forced mode: monolithic interface traces.
  std::vector<std::vector<double>> reference;
};

NnwrResult run_nnwr_1d(const NnwrConfig& config);

/// Two strips [x.lo, split] and [split, x.hi] over y, homogeneous Dirichlet
/// on the outer boundary, constant kappa.
struct Nnwr2dConfig {
  Interval x{0.0, 2.0};
  double split = 0.5;
  Interval y{-5.0, 5.0};
  double kappa = 1.0;
  double dx = 0.02;
  double dy = 0.2;
  TimeSettings time;
  double theta = 0.25;
  double tolerance = 1e-10;
  std::size_t max_iter = 20;
  RunMode mode = RunMode::ErrorEquation;
  /// Empty means 1 on interior y nodes (error equations) or 0 (forced).
  LineTrace initial_guess;
  SourceTerm2D source;
  InitialProfile2D initial;
  Schedule schedule = Schedule::Sequential;
  bool keep_history = false;
};

struct Nnwr2dResult {
  IterationReport report;
  std::vector<LineTrace> iterates;
  std::vector<double> mismatch;  // sup of the flux mismatch per iteration
};

/// Forced mode has no 2D monolithic reference: the reported error is the
/// update size.
Nnwr2dResult run_nnwr_2d(const Nnwr2dConfig& config);

}  // namespace fwr
