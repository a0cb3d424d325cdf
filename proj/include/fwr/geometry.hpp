#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fwr {

enum class Side { Left, Right };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

/// One slab [left, right] with constant diffusion coefficient on a uniform grid
/// whose nodes include both endpoints.
class Subdomain1D {
 public:
  Subdomain1D(double left, double right, double kappa, double dx);

  double left() const { return left_; }
  double right() const { return right_; }
  double length() const { return right_ - left_; }
  double kappa() const { return kappa_; }
  double dx() const { return dx_; }
  std::size_t cells() const { return cells_; }
  std::size_t size() const { return cells_ + 1; }
  double node(std::size_t i) const;
  std::vector<double> nodes() const;

 private:
  double left_;
  double right_;
  double kappa_;
  double dx_;
  std::size_t cells_;
};

class Partition1D {
 public:
  Partition1D() = default;
  explicit Partition1D(std::vector<Subdomain1D> subdomains);

  std::size_t count() const { return subs_.size(); }
  const Subdomain1D& operator[](std::size_t i) const { return subs_[i]; }
  const std::vector<Subdomain1D>& subdomains() const { return subs_; }
  Interval domain() const { return {subs_.front().left(), subs_.back().right()}; }
  /// Interior interface positions x_1..x_{N-1}.
  std::vector<double> interfaces() const;
  /// Neighbours sharing an interface with subdomain i.
  std::vector<std::size_t> neighbours(std::size_t i) const;

 private:
  std::vector<Subdomain1D> subs_;
};

/// Splits the domain at the breakpoints. kappas and dxs carry one entry per
/// subdomain, or a single entry applied to all of them.
Partition1D build_partition(Interval domain, std::span<const double> breakpoints,
                            std::span<const double> kappas, std::span<const double> dxs);

/// kappa (u_{i-1} - 2u_i + u_{i+1})/dx^2 at interior nodes; zero at the ends.
std::vector<double> laplacian_apply(const Subdomain1D& sub, std::span<const double> row);

/// Outward-normal flux kappa d_n u at one end from the one-sided second-order
/// three-point difference.
double interface_flux(std::span<const double> row, Side side, const Subdomain1D& sub);

/// Piecewise-quadratic interpolation of nodal values at x.
double ghost_interpolate(const Subdomain1D& sub, std::span<const double> row, double x);

/// Rectangle [x_left, x_right] x [y_bottom, y_top] with a tensor grid.
class Subdomain2D {
 public:
  Subdomain2D(Interval x, Interval y, double kappa, double dx, double dy);

  const Subdomain1D& x_axis() const { return x_; }
  const Subdomain1D& y_axis() const { return y_; }
  double kappa() const { return x_.kappa(); }
  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * ny() + j; }
  std::size_t size() const { return nx() * ny(); }

 private:
  Subdomain1D x_;
  Subdomain1D y_;
};

}  // namespace fwr
