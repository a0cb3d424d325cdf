#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fwr/errors.hpp"

namespace fwr::detail {

/// Tridiagonal rows where a few rows may also reach two columns away
/// (one-sided flux rows). Those reaches are folded into the tridiagonal
/// pattern using the adjacent row before the Thomas sweep.
struct TridiagonalRows {
  explicit TridiagonalRows(std::size_t n)
      : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), lower2(n, 0.0), upper2(n, 0.0), rhs(n, 0.0) {}

  std::size_t size() const { return diag.size(); }

  std::vector<double> lower;   // column i-1
  std::vector<double> diag;
  std::vector<double> upper;   // column i+1
  std::vector<double> lower2;  // column i-2
  std::vector<double> upper2;  // column i+2
  std::vector<double> rhs;
};

/// Solves in place; the rows are consumed.
inline std::vector<double> solve(TridiagonalRows& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m.lower2[i] != 0.0) {
      const std::size_t k = i - 1;
      const double f = m.lower2[i] / m.lower[k];
      m.lower[i] -= f * m.diag[k];
      m.diag[i] -= f * m.upper[k];
      m.rhs[i] -= f * m.rhs[k];
      m.lower2[i] = 0.0;
    }
    if (m.upper2[i] != 0.0) {
      const std::size_t k = i + 1;
      const double f = m.upper2[i] / m.upper[k];
      m.diag[i] -= f * m.lower[k];
      m.upper[i] -= f * m.diag[k];
      m.rhs[i] -= f * m.rhs[k];
      m.upper2[i] = 0.0;
    }
  }
  std::vector<double> c(n), d(n), x(n);
  double pivot = m.diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("tridiagonal solve: zero pivot");
  c[0] = m.upper[0] / pivot;
  d[0] = m.rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("tridiagonal solve: zero pivot");
    c[i] = m.upper[i] / pivot;
    d[i] = (m.rhs[i] - m.lower[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace fwr::detail
