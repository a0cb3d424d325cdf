#include "fwr/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fwr {

namespace {

double row_max(const std::vector<double>& row) {
  double m = 0.0;
  for (double v : row) m = std::max(m, v);
  return m;
}

}  // namespace

double IterationReport::max_error(std::size_t k) const {
  if (k == 0) return row_max(initial_error);
  return row_max(error.at(k - 1));
}

double IterationReport::max_update(std::size_t k) const { return row_max(update.at(k - 1)); }

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace fwr
