#include "fwr/fractional_time.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fwr/errors.hpp"

namespace fwr {

TimeMesh build_graded_mesh(double horizon, std::size_t steps, double grading) {
  if (!(horizon > 0.0)) throw std::invalid_argument("time mesh: horizon must be positive");
  if (steps < 1) throw std::invalid_argument("time mesh: need at least one step");
  if (!(grading >= 1.0)) throw std::invalid_argument("time mesh: grading exponent must be >= 1");

  TimeMesh mesh;
  mesh.horizon_ = horizon;
  mesh.grading_ = grading;
  mesh.points_.resize(steps + 1);
  const double n_total = static_cast<double>(steps);
  for (std::size_t n = 0; n <= steps; ++n) {
    const double s = static_cast<double>(n) / n_total;
    mesh.points_[n] = grading == 1.0 ? horizon * s : horizon * std::pow(s, grading);
  }
  mesh.points_.back() = horizon;
  return mesh;
}

double default_grading(double order) {
  if (order > 0.0 && order < 1.0) return (2.0 - order) / order;
  return 1.0;
}

CaputoWeights::CaputoWeights(CaputoScheme scheme, double order, TimeMesh mesh)
    : scheme_(scheme), order_(order), mesh_(std::move(mesh)) {
  const std::size_t n = mesh_.steps();
  rows_.assign(n * (n + 1) / 2, 0.0);
}

CaputoWeights caputo_l1_weights(const TimeMesh& mesh, double order) {
  if (!(order > 0.0 && order < 1.0))
    throw std::invalid_argument("L1 weights: order must lie in (0,1)");
  CaputoWeights w(CaputoScheme::L1, order, mesh);
  const double e = 1.0 - order;
  const double scale = 1.0 / std::tgamma(2.0 - order);
  for (std::size_t n = 1; n <= mesh.steps(); ++n) {
    const double tn = mesh.at(n);
    for (std::size_t j = 1; j <= n; ++j) {
      const double far = std::pow(tn - mesh.at(j - 1), e);
      const double near = j == n ? 0.0 : std::pow(tn - mesh.at(j), e);
      w.rows_[CaputoWeights::offset(n) + j - 1] = scale * (far - near) / mesh.step(j);
    }
  }
  return w;
}

CaputoWeights caputo_backward_euler_weights(const TimeMesh& mesh) {
  CaputoWeights w(CaputoScheme::BackwardEuler, 1.0, mesh);
  for (std::size_t n = 1; n <= mesh.steps(); ++n)
    w.rows_[CaputoWeights::offset(n) + n - 1] = 1.0 / mesh.step(n);
  return w;
}

std::vector<double> wave_coefficients(double order, std::size_t count) {
  std::vector<double> a(count);
  const double e = 2.0 - order;
  for (std::size_t j = 0; j < count; ++j) {
    const double x = static_cast<double>(j);
    a[j] = std::pow(x + 1.0, e) - std::pow(x, e);
  }
  return a;
}

CaputoWeights caputo_wave_weights(double dt, double order, std::size_t steps) {
  if (!(order > 1.0 && order < 2.0))
    throw std::invalid_argument("wave weights: order must lie in (1,2)");
  if (!(dt > 0.0)) throw std::invalid_argument("wave weights: step must be positive");
  CaputoWeights w(CaputoScheme::SunWu, order,
                  build_graded_mesh(dt * static_cast<double>(steps), steps, 1.0));
  const std::vector<double> a = wave_coefficients(order, steps);
  // Velocity history enters through the difference quotients (u^j - u^{j-1})/dt.
  const double scale = std::pow(dt, -order) / std::tgamma(3.0 - order);
  for (std::size_t n = 1; n <= steps; ++n) {
    double* row = w.rows_.data() + CaputoWeights::offset(n);
    row[n - 1] = scale * a[0];
    for (std::size_t k = 1; k < n; ++k) row[k - 1] = -scale * (a[n - k - 1] - a[n - k]);
  }
  return w;
}

CaputoWeights caputo_weights(const TimeMesh& mesh, double order) {
  if (order > 0.0 && order < 1.0) return caputo_l1_weights(mesh, order);
  if (order == 1.0) return caputo_backward_euler_weights(mesh);
  if (order > 1.0 && order < 2.0) {
    if (!mesh.uniform())
      throw UnsupportedError("wave scheme requires a uniform time mesh");
    return caputo_wave_weights(mesh.step(1), order, mesh.steps());
  }
  throw std::invalid_argument("Caputo order must lie in (0,2), got " + std::to_string(order));
}

CaputoWeights build_weights(const TimeSettings& settings) {
  const double r = settings.grading > 0.0 ? settings.grading : default_grading(settings.order);
  return caputo_weights(build_graded_mesh(settings.horizon, settings.steps, r), settings.order);
}

double caputo_apply(const CaputoWeights& weights, std::span<const double> history) {
  if (history.size() < 2 || history.size() > weights.steps() + 1)
    throw std::invalid_argument("caputo_apply: history length does not match a weight row");
  const std::size_t n = history.size() - 1;
  const auto row = weights.row(n);
  double value = 0.0;
  for (std::size_t j = 1; j <= n; ++j) value += row[j - 1] * (history[j] - history[j - 1]);
  return value;
}

}  // namespace fwr
