#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fwr {

/// Discrete time axis t_0 = 0 < t_1 < ... < t_N = T.
///
/// Built by build_graded_mesh with t_n = T (n/N)^r; r = 1 gives the
/// uniform mesh.
class TimeMesh {
 public:
  TimeMesh() = default;

  std::size_t steps() const { return points_.empty() ? 0 : points_.size() - 1; }
  double horizon() const { return horizon_; }
  double grading() const { return grading_; }
  double at(std::size_t n) const { return points_.at(n); }
  /// Length of the n-th step, t_n - t_{n-1}, n >= 1.
  double step(std::size_t n) const { return points_.at(n) - points_.at(n - 1); }
  bool uniform() const { return grading_ == 1.0; }
  std::span<const double> points() const { return points_; }

 private:
  friend TimeMesh build_graded_mesh(double horizon, std::size_t steps, double grading);

  std::vector<double> points_;
  double grading_ = 1.0;
  double horizon_ = 0.0;
};

TimeMesh build_graded_mesh(double horizon, std::size_t steps, double grading);

/// Grading exponent (2 - order)/order for sub-diffusion orders in (0,1),
/// 1 otherwise.
double default_grading(double order);

enum class CaputoScheme {
  L1,             // order in (0,1), any mesh
  BackwardEuler,  // order == 1
  SunWu,          // order in (1,2), uniform mesh, zero initial velocity
};

/// Lower-triangular convolution weights of a discrete Caputo derivative.
///
/// Every scheme is written in increment form
///
///   D^order u (at level n) ~= sum_{j=1}^{n} b(n,j) (u^j - u^{j-1}),
///
/// so constants are annihilated exactly. Row n approximates
/// w D(t_n) + (1 - w) D(t_{n-1}) with w = implicit_weight(); solvers weight the
/// spatial operator and the source the same way.
class CaputoWeights {
 public:
  CaputoWeights() = default;
  CaputoWeights(CaputoScheme scheme, double order, TimeMesh mesh);

  CaputoScheme scheme() const { return scheme_; }
  double order() const { return order_; }
  const TimeMesh& mesh() const { return mesh_; }
  std::size_t steps() const { return mesh_.steps(); }

  /// b(n,j) for 1 <= j <= n <= steps().
  double operator()(std::size_t n, std::size_t j) const { return rows_[offset(n) + j - 1]; }
  double diagonal(std::size_t n) const { return (*this)(n, n); }
  std::span<const double> row(std::size_t n) const { return {rows_.data() + offset(n), n}; }

  /// 1 for the fully implicit schemes, 1/2 for the time-centred wave scheme.
  double implicit_weight() const { return scheme_ == CaputoScheme::SunWu ? 0.5 : 1.0; }
  /// w f(t_n) + (1 - w) f(t_{n-1}) for a function of time.
  template <class F>
  double level_average(std::size_t n, F&& f) const {
    const double w = implicit_weight();
    if (w == 1.0) return f(mesh_.at(n));
    return w * f(mesh_.at(n)) + (1.0 - w) * f(mesh_.at(n - 1));
  }

 private:
  friend CaputoWeights caputo_l1_weights(const TimeMesh&, double);
  friend CaputoWeights caputo_backward_euler_weights(const TimeMesh&);
  friend CaputoWeights caputo_wave_weights(double, double, std::size_t);

  static std::size_t offset(std::size_t n) { return (n - 1) * n / 2; }

  CaputoScheme scheme_ = CaputoScheme::L1;
  double order_ = 0.0;
  TimeMesh mesh_;
  std::vector<double> rows_;
};

CaputoWeights caputo_l1_weights(const TimeMesh& mesh, double order);
CaputoWeights caputo_backward_euler_weights(const TimeMesh& mesh);
CaputoWeights caputo_wave_weights(double dt, double order, std::size_t steps);

/// a_j = (j+1)^{2-order} - j^{2-order}, j = 0..count-1.
std::vector<double> wave_coefficients(double order, std::size_t count);

/// Picks the scheme for the order: L1 below 1, backward Euler at 1, SunWu
/// above 1 (which requires a uniform mesh).
CaputoWeights caputo_weights(const TimeMesh& mesh, double order);

/// Time discretisation as carried by configurations. grading <= 0 selects
/// default_grading(order).
struct TimeSettings {
  double order = 0.5;
  double horizon = 1.0;
  std::size_t steps = 64;
  double grading = 0.0;
};

CaputoWeights build_weights(const TimeSettings& settings);

/// Discrete Caputo value at level n = history.size() - 1 from samples
/// u^0..u^n.
double caputo_apply(const CaputoWeights& weights, std::span<const double> history);

}  // namespace fwr
