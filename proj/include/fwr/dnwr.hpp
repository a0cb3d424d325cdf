#pragma once

#include <vector>

#include "fwr/field.hpp"
#include "fwr/fractional_time.hpp"
#include "fwr/geometry.hpp"
#include "fwr/iteration.hpp"

namespace fwr {

/// 1/(1 + sqrt(kappa1/kappa2)): two-step convergence when both scaled
/// lengths agree.
double optimal_theta_dnwr(double kappa1, double kappa2);

/// sqrt(kappa1)/(sqrt(kappa1) + sqrt(kappa2)), the alternative normalisation.
/// Kept for comparison only.
double alternative_theta_dnwr(double kappa1, double kappa2);

struct DnwrConfig {
  Partition1D partition;  // exactly two subdomains; Dirichlet side first
  TimeSettings time;
  double theta = 0.5;
  double tolerance = 1e-10;
  std::size_t max_iter = 20;
  RunMode mode = RunMode::ErrorEquation;
  /// h^(0) over t_1..t_N; empty means 1 (error equations) or 0 (forced).
  std::vector<double> initial_guess;
  SourceTerm source;       // forced mode only
  InitialProfile initial;  // forced mode only
  bool keep_history = false;
  bool keep_fields = false;
};

struct DnwrResult {
  IterationReport report;
  /// With keep_history: h^(0), h^(1), ... and the Neumann-side traces
  /// u_2^(k) on the interface for k >= 1.
  std::vector<std::vector<double>> iterates;
  std::vector<std::vector<double>> neumann_traces;
  /// Forced mode: interface trace of the monolithic solution.
  std::vector<double> reference;
  /// With keep_fields: the last Dirichlet and Neumann fields.
  std::vector<SpaceTimeField> fields;
};

/// Throws std::invalid_argument on an invalid configuration. Non-convergence
/// is reported through report.converged.
DnwrResult run_dnwr(const DnwrConfig& config);

}  // namespace fwr
