#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fwr {

// Special functions and kernels. Throughout, alpha is the exponent of s in
// exp(-l s^alpha); in the convergence estimates alpha = nu = order/2.

/// (1 - alpha) alpha^{alpha/(1-alpha)}, the minimum of u_phi over (0, pi).
double lambda_constant(double alpha);

/// (sin(alpha phi)/sin phi)^{alpha/(1-alpha)} sin((1-alpha) phi)/sin phi on
/// [0, pi], extended by its limits (finite at 0, +inf at pi).
double u_phi(double alpha, double phi);

/// M-Wright function M_alpha(x), x > 0, from its integral representation.
double mwright(double alpha, double x);

/// Tail mass int_x0^inf M_alpha(x) dx for x0 >= 0.
double mwright_tail(double alpha, double x0);

/// Inverse Laplace transform of exp(-l s^alpha) at t.
double invlap_exp_kernel(double alpha, double l, double t);

/// L1(0,t) norm of that kernel, evaluated exactly as a tail mass.
double kernel_l1_norm(double alpha, double l, double t);

/// exp(-(1-alpha) (alpha/t)^{alpha/(1-alpha)} l^{1/(1-alpha)}).
double kernel_l1_bound(double alpha, double l, double t);

using LaplaceTransform = std::function<std::complex<double>(std::complex<double>)>;

/// Fixed-Talbot inversion with `nodes` contour points. Throws NumericalError
/// when the transform returns a non-finite value.
double talbot_invert(const LaplaceTransform& transform, double t, std::size_t nodes = 32);

enum class KernelKind { Phi, Psi };  // sinh ratio, cosh ratio

/// sinh(l1 s^alpha)/sinh(l2 s^alpha) or the cosh ratio, in overflow-free form.
LaplaceTransform ratio_kernel(KernelKind kind, double alpha, double l1, double l2);

struct PositivityReport {
  double min_value = 0.0;
  double argmin = 0.0;
  std::vector<double> values;
};

PositivityReport kernel_positivity_check(KernelKind kind, double alpha, double l1, double l2,
                                         std::span<const double> t_grid);

// Kernel estimates used by the convergence proofs. Each *_l1 evaluates the
// left-hand side numerically, each *_bound the closed-form right-hand side.

/// L1(0,t) norm of the inverse transform of cosech^k(l s^alpha) via its
/// M-Wright series.
double cosech_power_l1(double alpha, double l, std::size_t k, double t);
double cosech_power_bound(double alpha, double l, std::size_t k, double t);

/// Inverse transform of sinh^k((l2-l1) s^alpha)/sinh^k(l2 s^alpha), pointwise
/// from its series, and its L1(0,t) norm by adaptive quadrature of |f|.
double sinh_ratio_power_kernel(double alpha, double l1, double l2, std::size_t k, double t);
double sinh_ratio_power_l1(double alpha, double l1, double l2, std::size_t k, double t);
double sinh_ratio_power_bound(double alpha, double l1, double l2, std::size_t k, double t);

/// exp(-l1 s^alpha)/(1 - exp(-l2 s^alpha)): L1(0,t) norm by Talbot inversion
/// and quadrature, the same norm from the exponential series, and the bound.
double geometric_kernel_l1_talbot(double alpha, double l1, double l2, double t);
double geometric_kernel_l1_series(double alpha, double l1, double l2, double t);
double geometric_kernel_bound(double alpha, double l1, double l2, double t);

// Convergence estimates.

enum class DnwrCase { Sub, Wave };

/// Parameters of the two-subdomain DNWR estimates. A = a/sqrt(kappa1),
/// B = b/sqrt(kappa2).
struct DnwrBoundParams {
  double nu = 0.25;
  double A = 1.0;
  double B = 1.0;
  double theta_star = 0.5;
  double horizon = 1.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double delta = 0.0;
  int c = 1;
  double C = 1.0;
  double D = 1.0;

  double beta1(std::size_t k) const;
  double beta2(std::size_t k) const;
};

DnwrBoundParams make_dnwr_bound_params(double nu, double A, double B, double theta_star, double horizon);

/// Bound on |w^(k)|/|w^(0)|. Sub requires nu <= 1/2, Wave nu > 1/2;
/// otherwise std::invalid_argument. For Sub with A < B the estimate holds at
/// even k; odd k return the value at k - 1.
double dnwr_bound(const DnwrBoundParams& p, std::size_t k, DnwrCase kind);

/// How the exponential constant inside Q_j and D is read: Lambda is the
/// dimensionally consistent reading of the exp(-l s^nu) kernel bound, Mu the
/// literal one.
enum class QConstant { Lambda, Mu };

struct NnwrBoundParams {
  double nu = 0.25;
  double horizon = 1.0;
  std::vector<double> lengths;  // scaled l_i = h_i/sqrt(kappa_i), per subdomain
  std::vector<double> kappas;
  std::vector<double> theta;    // per interface
  QConstant reading = QConstant::Lambda;
  double h_min = 0.0;
  double mu = 0.0;
  double q = 0.0;  // constant used in Q_j and D
  double D = 0.0;
  /// W[i] holds W_{i,j} for j = i-2..i+2 (0 where the interface is absent).
  std::vector<std::array<double, 5>> W;
  std::vector<double> c_i;
  double c = 0.0;
  bool applicable = true;
};

/// Subdomain widths and coefficients; theta defaults to the optimal values.
NnwrBoundParams make_nnwr_bound_params(double nu, std::span<const double> widths,
                                       std::span<const double> kappas, double horizon,
                                       std::span<const double> theta = {},
                                       QConstant reading = QConstant::Lambda);

/// c^k exp(-mu (2k)^{1/(1-nu)}); nullopt when the geometry makes the
/// estimate inapplicable.
std::optional<double> nnwr_bound(const NnwrBoundParams& p, std::size_t k);

struct Nnwr2dBoundParams {
  double nu = 0.25;
  double A = 0.5;
  double B = 1.5;
  double horizon = 1.0;
  double P = 0.0;
  double E = 0.0;
  double Lambda = 0.0;
  int c = 1;
  /// Wave case: the estimate holds for k > K.
  std::size_t K = 0;

  double F(std::size_t k) const;
  double H(std::size_t k) const;
};

Nnwr2dBoundParams make_nnwr2d_bound_params(double nu, double A, double B, double horizon);

/// nullopt for wave orders with k <= K.
std::optional<double> nnwr2d_bound(const Nnwr2dBoundParams& p, std::size_t k);

/// floor(1/(1-nu)) guarded against roundoff just below an integer.
int floor_inverse_complement(double nu);

}  // namespace fwr
