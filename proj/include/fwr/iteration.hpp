#pragma once

#include <cstddef>
#include <vector>

namespace fwr {

/// ErrorEquation runs with zero source, boundary and initial data, so the
/// interface iterate is its own error. Forced runs the actual problem and
/// measures against a monolithic reference.
enum class RunMode { ErrorEquation, Forced };

/// Sequential or thread-per-subdomain execution of the independent solves.
enum class Schedule { Sequential, Concurrent };

struct IterationReport {
  std::vector<double> theta;                // per interface
  std::vector<double> initial_error;        // per interface, iterate 0
  std::vector<std::vector<double>> error;   // [k-1][interface], sup over time (and y)
  std::vector<std::vector<double>> update;  // [k-1][interface], sup |h^(k) - h^(k-1)|
  std::size_t iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;

  std::size_t interfaces() const { return theta.size(); }
  /// max over interfaces of error[k-1]; k = 0 gives the initial error.
  double max_error(std::size_t k) const;
  double max_update(std::size_t k) const;
};

double sup_norm(const std::vector<double>& v);
double sup_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fwr
