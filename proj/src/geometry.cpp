#include "fwr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fwr {
namespace {

constexpr double kDivisibilityTolerance = 1e-9;

std::size_t cell_count(double length, double dx) {
  const double ratio = length / dx;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > kDivisibilityTolerance * std::max(1.0, ratio))
    throw std::invalid_argument("grid step " + std::to_string(dx) +
                                " does not divide subdomain length " + std::to_string(length));
  return static_cast<std::size_t>(rounded);
}

}  // namespace

Subdomain1D::Subdomain1D(double left, double right, double kappa, double dx)
    : left_(left), right_(right), kappa_(kappa), dx_(dx), cells_(0) {
  if (!(left < right)) throw std::invalid_argument("subdomain: left end must be below right end");
  if (!(kappa > 0.0)) throw std::invalid_argument("subdomain: diffusion coefficient must be positive");
  if (!(dx > 0.0)) throw std::invalid_argument("subdomain: grid step must be positive");
  cells_ = cell_count(right - left, dx);
  if (cells_ < 2) throw std::invalid_argument("subdomain: need at least one interior node");
  dx_ = (right - left) / static_cast<double>(cells_);
}

double Subdomain1D::node(std::size_t i) const {
  if (i == cells_) return right_;
  return left_ + static_cast<double>(i) * dx_;
}

std::vector<double> Subdomain1D::nodes() const {
  std::vector<double> x(size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = node(i);
  return x;
}

Partition1D::Partition1D(std::vector<Subdomain1D> subdomains) : subs_(std::move(subdomains)) {
  if (subs_.empty()) throw std::invalid_argument("partition: no subdomains");
  for (std::size_t i = 1; i < subs_.size(); ++i)
    if (subs_[i].left() != subs_[i - 1].right())
      throw std::invalid_argument("partition: subdomains must share interface points");
}

std::vector<double> Partition1D::interfaces() const {
  std::vector<double> x;
  for (std::size_t i = 0; i + 1 < subs_.size(); ++i) x.push_back(subs_[i].right());
  return x;
}

std::vector<std::size_t> Partition1D::neighbours(std::size_t i) const {
  std::vector<std::size_t> n;
  if (i > 0) n.push_back(i - 1);
  if (i + 1 < subs_.size()) n.push_back(i + 1);
  return n;
}

Partition1D build_partition(Interval domain, std::span<const double> breakpoints,
                            std::span<const double> kappas, std::span<const double> dxs) {
  if (!(domain.lo < domain.hi)) throw std::invalid_argument("partition: empty domain");
  const std::size_t count = breakpoints.size() + 1;
  auto pick = [count](std::span<const double> v, std::size_t i, const char* what) {
    if (v.size() == 1) return v[0];
    if (v.size() != count)
      throw std::invalid_argument(std::string("partition: expected ") + std::to_string(count) +
                                  " entries for " + what + ", got " + std::to_string(v.size()));
    return v[i];
  };
  std::vector<double> ends{domain.lo};
  for (double b : breakpoints) {
    if (!(b > ends.back() && b < domain.hi))
      throw std::invalid_argument("partition: breakpoints must increase strictly inside the domain");
    ends.push_back(b);
  }
  ends.push_back(domain.hi);
  std::vector<Subdomain1D> subs;
  for (std::size_t i = 0; i < count; ++i)
    subs.emplace_back(ends[i], ends[i + 1], pick(kappas, i, "kappa"), pick(dxs, i, "dx"));
  return Partition1D(std::move(subs));
}

std::vector<double> laplacian_apply(const Subdomain1D& sub, std::span<const double> row) {
  if (row.size() != sub.size()) throw std::invalid_argument("laplacian_apply: row length mismatch");
  std::vector<double> out(row.size(), 0.0);
  const double c = sub.kappa() / (sub.dx() * sub.dx());
  for (std::size_t i = 1; i + 1 < row.size(); ++i)
    out[i] = c * (row[i - 1] - 2.0 * row[i] + row[i + 1]);
  return out;
}

double interface_flux(std::span<const double> row, Side side, const Subdomain1D& sub) {
  if (row.size() < 3) throw std::invalid_argument("interface_flux: need at least three nodes");
  if (row.size() != sub.size()) throw std::invalid_argument("interface_flux: row length mismatch");
  const double c = sub.kappa() / (2.0 * sub.dx());
  const std::size_t n = row.size() - 1;
  if (side == Side::Right) return c * (3.0 * row[n] - 4.0 * row[n - 1] + row[n - 2]);
  return c * (3.0 * row[0] - 4.0 * row[1] + row[2]);
}

double ghost_interpolate(const Subdomain1D& sub, std::span<const double> row, double x) {
  if (row.size() != sub.size()) throw std::invalid_argument("ghost_interpolate: row length mismatch");
  const double slack = 1e-12 * sub.length();
  if (x < sub.left() - slack || x > sub.right() + slack)
    throw std::invalid_argument("ghost_interpolate: point outside the neighbour interval");
  const double s = (x - sub.left()) / sub.dx();
  // Centre the three-point stencil on the nearest node, clamped to the grid.
  long centre = std::lround(s);
  centre = std::clamp<long>(centre, 1, static_cast<long>(sub.cells()) - 1);
  const auto i = static_cast<std::size_t>(centre);
  const double r = s - static_cast<double>(centre);
  const double lm = 0.5 * r * (r - 1.0);
  const double l0 = (1.0 - r) * (1.0 + r);
  const double lp = 0.5 * r * (r + 1.0);
  return lm * row[i - 1] + l0 * row[i] + lp * row[i + 1];
}

Subdomain2D::Subdomain2D(Interval x, Interval y, double kappa, double dx, double dy)
    : x_(x.lo, x.hi, kappa, dx), y_(y.lo, y.hi, kappa, dy) {}

}  // namespace fwr
