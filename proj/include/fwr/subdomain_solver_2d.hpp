#pragma once

#include <memory>
#include <vector>

#include "fwr/field.hpp"
#include "fwr/fractional_time.hpp"
#include "fwr/geometry.hpp"
#include "fwr/subdomain_solver.hpp"

namespace fwr {

/// Data along a vertical grid line over t_1..t_N: values[(n-1) * ny + j].
/// Entries at the two y-boundary nodes are ignored (homogeneous Dirichlet).
struct LineTrace {
  std::size_t ny = 0;
  std::vector<double> values;

  LineTrace() = default;
  LineTrace(std::size_t levels, std::size_t ny_) : ny(ny_), values(levels * ny_, 0.0) {}
  double& at(std::size_t n, std::size_t j) { return values[(n - 1) * ny + j]; }
  double at(std::size_t n, std::size_t j) const { return values[(n - 1) * ny + j]; }
  bool empty() const { return values.empty(); }
};

struct LineCondition {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  LineTrace data;  // empty means homogeneous
};

/// Space-time solver for one strip subdomain with fixed boundary kinds.
///
/// The per-level matrices b(n,n) I - omega kappa Lap_h depend only on the
/// geometry, the boundary kinds and the weights, so their LU factorisations
/// are computed once and reused across solves (and decomposition iterations).
class StripSolver {
 public:
  StripSolver(Subdomain2D sub, CaputoWeights weights, BoundaryKind left, BoundaryKind right);
  ~StripSolver();
  StripSolver(StripSolver&&) noexcept;
  StripSolver& operator=(StripSolver&&) noexcept;

  const Subdomain2D& subdomain() const { return sub_; }
  const CaputoWeights& weights() const { return weights_; }

  /// Boundary kinds must match the ones given at construction. Throws
  /// NumericalError when a level's relative residual exceeds 1e-10.
  SpaceTimeField solve(const LineCondition& left, const LineCondition& right,
                       const SourceTerm2D& source = {}, const InitialProfile2D& initial = {}) const;

 private:
  struct Factorisations;

  Subdomain2D sub_;
  CaputoWeights weights_;
  BoundaryKind left_;
  BoundaryKind right_;
  std::unique_ptr<Factorisations> lu_;
};

SpaceTimeField solve_dirichlet_waveform_2d(const Subdomain2D& sub, const CaputoWeights& weights,
                                           const LineCondition& left, const LineCondition& right,
                                           const SourceTerm2D& source = {},
                                           const InitialProfile2D& initial = {});

SpaceTimeField solve_neumann_waveform_2d(const Subdomain2D& sub, const CaputoWeights& weights,
                                         const LineCondition& left, const LineCondition& right,
                                         const SourceTerm2D& source = {},
                                         const InitialProfile2D& initial = {});

/// Values on the end column over t_1..t_N.
LineTrace end_line_trace(const SpaceTimeField& field, const Subdomain2D& sub, Side side);
/// Outward flux kappa d_n u on the end column over t_1..t_N.
LineTrace flux_line_trace(const SpaceTimeField& field, const Subdomain2D& sub, Side side);

}  // namespace fwr
