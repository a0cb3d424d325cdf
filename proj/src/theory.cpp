#include "fwr/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "fwr/errors.hpp"
#include "fwr/nnwr.hpp"

namespace fwr {
namespace {

constexpr double kPi = std::numbers::pi;

void require_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument(std::string(where) + ": alpha must lie in (0, 1)");
}

void require_positive(double v, const char* name, const char* where) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(where) + ": " + name + " must be positive");
}

// the rule grows its abscissa tables lazily, so each thread keeps its own
boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

// int_0^pi g(phi) dphi for the M-Wright integrands
template <class F>
double integrate_phi(F f) {
  double err = 0.0;
  return tanh_sinh_rule().integrate(f, 0.0, kPi, 1e-13, &err);
}

// int_0^t f, f smooth and vanishing to all orders at 0
template <class F>
double integrate_time(F f, double t, double tol) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, t, 12, tol, &err);
}

double binom(std::size_t n, std::size_t k) {
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(k));
}

double beta_of(double alpha) { return 1.0 / (1.0 - alpha); }

// (1-alpha)(alpha/t)^{alpha/(1-alpha)}: the exponent constant at time t
double time_constant(double alpha, double t) {
  return (1.0 - alpha) * std::pow(alpha / t, alpha / (1.0 - alpha));
}

double bracket_exponent(double ratio, std::size_t k, int c, double alpha) {
  double kk = static_cast<double>(k);
  double v = std::pow(ratio + kk, c) - std::pow(kk, c);
  return std::pow(v, 1.0 / (c * (1.0 - alpha)));
}

// Sum of coeff(j, m) * g(lambda(j, m)) over m until the exponential mass bound
// of the next block drops below roundoff relative to the accumulated sum.
template <class Term>
double series_sum(double alpha, double t, double lambda0, double lambda_step, Term&& term) {
  double sum = 0.0;
  for (std::size_t m = 0; m < 100000; ++m) {
    double lambda = lambda0 + lambda_step * static_cast<double>(m);
    double add = term(m, lambda);
    sum += add;
    double tail_scale = kernel_l1_bound(alpha, lambda, t) * binom(m + 64, m);
    if (m > 0 && tail_scale < 1e-17 * std::max(std::abs(sum), 1e-300)) break;
    if (m > 0 && tail_scale < 1e-300) break;
  }
  return sum;
}

}  // namespace

int floor_inverse_complement(double nu) {
  double v = 1.0 / (1.0 - nu);
  return static_cast<int>(std::floor(v + 1e-9));
}

double lambda_constant(double alpha) {
  require_alpha(alpha, "lambda_constant");
  return (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
}

double u_phi(double alpha, double phi) {
  require_alpha(alpha, "u_phi");
  if (!(phi >= 0.0 && phi <= kPi)) throw std::invalid_argument("u_phi: phi must lie in [0, pi]");
  if (phi < 1e-6) {
    // sin(a phi)/sin phi = a (1 + (1 - a^2) phi^2/6 + ...)
    double p2 = phi * phi;
    double r1 = alpha * (1.0 + (1.0 - alpha * alpha) * p2 / 6.0);
    double a2 = 1.0 - alpha;
    double r2 = a2 * (1.0 + (1.0 - a2 * a2) * p2 / 6.0);
    return std::pow(r1, alpha / (1.0 - alpha)) * r2;
  }
  double s = std::sin(phi);
  if (phi >= kPi || s <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(std::sin(alpha * phi) / s, alpha / (1.0 - alpha)) * std::sin((1.0 - alpha) * phi) / s;
}

double mwright(double alpha, double x) {
  require_alpha(alpha, "mwright");
  require_positive(x, "x", "mwright");
  double y = std::pow(x, beta_of(alpha));
  double integral = integrate_phi([&](double phi) {
    double u = u_phi(alpha, phi);
    if (!std::isfinite(u)) return 0.0;
    return u * std::exp(-u * y);
  });
  if (integral == 0.0) return 0.0;
  return std::pow(x, alpha / (1.0 - alpha)) / (kPi * (1.0 - alpha)) * integral;
}

double mwright_tail(double alpha, double x0) {
  require_alpha(alpha, "mwright_tail");
  if (!(x0 >= 0.0)) throw std::invalid_argument("mwright_tail: x0 must be non-negative");
  if (x0 == 0.0) return 1.0;
  double y = std::pow(x0, beta_of(alpha));
  double integral = integrate_phi([&](double phi) {
    double u = u_phi(alpha, phi);
    if (!std::isfinite(u)) return 0.0;
    return std::exp(-u * y);
  });
  return integral / kPi;
}

double invlap_exp_kernel(double alpha, double l, double t) {
  require_alpha(alpha, "invlap_exp_kernel");
  require_positive(l, "l", "invlap_exp_kernel");
  require_positive(t, "t", "invlap_exp_kernel");
  double m = mwright(alpha, l * std::pow(t, -alpha));
  if (m == 0.0) return 0.0;  // t^{-(alpha+1)} may overflow first
  return l * alpha * std::pow(t, -(alpha + 1.0)) * m;
}

double kernel_l1_norm(double alpha, double l, double t) {
  require_alpha(alpha, "kernel_l1_norm");
  require_positive(t, "t", "kernel_l1_norm");
  if (!(l >= 0.0)) throw std::invalid_argument("kernel_l1_norm: l must be non-negative");
  return mwright_tail(alpha, l * std::pow(t, -alpha));
}

double kernel_l1_bound(double alpha, double l, double t) {
  require_alpha(alpha, "kernel_l1_bound");
  require_positive(t, "t", "kernel_l1_bound");
  if (!(l >= 0.0)) throw std::invalid_argument("kernel_l1_bound: l must be non-negative");
  return std::exp(-time_constant(alpha, t) * std::pow(l, beta_of(alpha)));
}

double talbot_invert(const LaplaceTransform& transform, double t, std::size_t nodes) {
  require_positive(t, "t", "talbot_invert");
  if (nodes < 2) throw std::invalid_argument("talbot_invert: need at least 2 contour nodes");
  const double M = static_cast<double>(nodes);
  const double r = 2.0 * M / (5.0 * t);
  auto checked = [&](std::complex<double> s) {
    std::complex<double> v = transform(s);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("talbot_invert: transform is not finite on the contour");
    return v;
  };
  double sum = 0.5 * checked({r, 0.0}).real() * std::exp(r * t);
  for (std::size_t k = 1; k < nodes; ++k) {
    double th = static_cast<double>(k) * kPi / M;
    double cot = std::cos(th) / std::sin(th);
    std::complex<double> s(r * th * cot, r * th);
    double sigma = th + (th * cot - 1.0) * cot;
    sum += (std::exp(t * s) * checked(s) * std::complex<double>(1.0, sigma)).real();
  }
  return r / M * sum;
}

LaplaceTransform ratio_kernel(KernelKind kind, double alpha, double l1, double l2) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("ratio_kernel: alpha must lie in (0, 1]");
  if (!(l1 >= 0.0 && l1 < l2)) throw std::invalid_argument("ratio_kernel: need 0 <= l1 < l2");
  double sign = kind == KernelKind::Phi ? -1.0 : 1.0;
  return [=](std::complex<double> s) {
    std::complex<double> z = std::pow(s, alpha);
    std::complex<double> num = 1.0 + sign * std::exp(-2.0 * l1 * z);
    std::complex<double> den = 1.0 + sign * std::exp(-2.0 * l2 * z);
    return std::exp((l1 - l2) * z) * num / den;
  };
}

PositivityReport kernel_positivity_check(KernelKind kind, double alpha, double l1, double l2,
                                         std::span<const double> t_grid) {
  if (!(alpha > 0.0 && alpha <= 0.5))
    throw std::invalid_argument("kernel_positivity_check: alpha must lie in (0, 1/2]");
  auto F = ratio_kernel(kind, alpha, l1, l2);
  PositivityReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    double v = talbot_invert(F, t);
    rep.values.push_back(v);
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.argmin = t;
    }
  }
  return rep;
}

double cosech_power_l1(double alpha, double l, std::size_t k, double t) {
  require_alpha(alpha, "cosech_power_l1");
  require_positive(l, "l", "cosech_power_l1");
  if (k == 0) throw std::invalid_argument("cosech_power_l1: k must be at least 1");
  // cosech^k(z) = 2^k sum_m C(m+k-1, m) e^{-(2m+k) z}
  double sum = series_sum(alpha, t, k * l, 2.0 * l, [&](std::size_t m, double lambda) {
    return binom(m + k - 1, m) * kernel_l1_norm(alpha, lambda, t);
  });
  return std::pow(2.0, static_cast<double>(k)) * sum;
}

double cosech_power_bound(double alpha, double l, std::size_t k, double t) {
  require_alpha(alpha, "cosech_power_bound");
  double A1 = time_constant(alpha, t) * std::pow(l, beta_of(alpha));
  int c = floor_inverse_complement(alpha);
  double B1 = bracket_exponent(2.0, k, c, alpha);
  double kk = static_cast<double>(k);
  return std::pow(2.0 / (1.0 - std::exp(-A1 * B1)), kk) * std::exp(-A1 * std::pow(kk, beta_of(alpha)));
}

double sinh_ratio_power_kernel(double alpha, double l1, double l2, std::size_t k, double t) {
  require_alpha(alpha, "sinh_ratio_power_kernel");
  if (!(l1 > 0.0 && l1 < l2)) throw std::invalid_argument("sinh_ratio_power_kernel: need 0 < l1 < l2");
  if (k == 0) throw std::invalid_argument("sinh_ratio_power_kernel: k must be at least 1");
  double total = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    double base = k * l1 + 2.0 * j * (l2 - l1);
    double inner = series_sum(alpha, t, base, 2.0 * l2, [&](std::size_t m, double lambda) {
      return binom(m + k - 1, m) * invlap_exp_kernel(alpha, lambda, t);
    });
    total += sgn * binom(k, j) * inner;
  }
  return total;
}

double sinh_ratio_power_l1(double alpha, double l1, double l2, std::size_t k, double t) {
  require_positive(t, "t", "sinh_ratio_power_l1");
  return integrate_time(
      [&](double s) { return s <= 0.0 ? 0.0 : std::abs(sinh_ratio_power_kernel(alpha, l1, l2, k, s)); }, t,
      1e-9);
}

double sinh_ratio_power_bound(double alpha, double l1, double l2, std::size_t k, double t) {
  require_alpha(alpha, "sinh_ratio_power_bound");
  double tc = time_constant(alpha, t);
  double beta = beta_of(alpha);
  double A2 = tc * std::pow(2.0 * l2 - 2.0 * l1, beta);
  double B2 = tc * std::pow(l1, beta);
  int c = floor_inverse_complement(alpha);
  double C2 = bracket_exponent(2.0 * l2 / l1, k, c, alpha);
  double kk = static_cast<double>(k);
  return std::pow((1.0 + std::exp(-A2)) / (1.0 - std::exp(-B2 * C2)), kk) * std::exp(-B2 * std::pow(kk, beta));
}

double geometric_kernel_l1_talbot(double alpha, double l1, double l2, double t) {
  require_alpha(alpha, "geometric_kernel_l1_talbot");
  require_positive(l1, "l1", "geometric_kernel_l1_talbot");
  require_positive(l2, "l2", "geometric_kernel_l1_talbot");
  require_positive(t, "t", "geometric_kernel_l1_talbot");
  LaplaceTransform F = [=](std::complex<double> s) {
    std::complex<double> z = std::pow(s, alpha);
    if (z.real() >= 0.0) return std::exp(-l1 * z) / (1.0 - std::exp(-l2 * z));
    return -std::exp((l2 - l1) * z) / (1.0 - std::exp(l2 * z));
  };
  return integrate_time([&](double s) { return s <= 0.0 ? 0.0 : std::abs(talbot_invert(F, s)); }, t, 1e-9);
}

double geometric_kernel_l1_series(double alpha, double l1, double l2, double t) {
  require_alpha(alpha, "geometric_kernel_l1_series");
  require_positive(l1, "l1", "geometric_kernel_l1_series");
  require_positive(l2, "l2", "geometric_kernel_l1_series");
  return series_sum(alpha, t, l1, l2, [&](std::size_t, double lambda) { return kernel_l1_norm(alpha, lambda, t); });
}

double geometric_kernel_bound(double alpha, double l1, double l2, double t) {
  require_alpha(alpha, "geometric_kernel_bound");
  double Lam = lambda_constant(alpha);
  double lead = 1.0 + std::pow(t, alpha) * std::tgamma(2.0 - alpha) / (l2 * std::pow(Lam, 1.0 - alpha));
  return lead * std::exp(-Lam * std::pow(l1 / std::pow(t, alpha), beta_of(alpha)));
}

// ---------------------------------------------------------------------------

double DnwrBoundParams::beta1(std::size_t k) const { return bracket_exponent(2.0 * C / D, k, c, nu); }
double DnwrBoundParams::beta2(std::size_t k) const { return bracket_exponent(2.0, k, c, nu); }

DnwrBoundParams make_dnwr_bound_params(double nu, double A, double B, double theta_star, double horizon) {
  require_alpha(nu, "make_dnwr_bound_params");
  require_positive(A, "A", "make_dnwr_bound_params");
  require_positive(B, "B", "make_dnwr_bound_params");
  require_positive(horizon, "horizon", "make_dnwr_bound_params");
  if (!(theta_star > 0.0 && theta_star < 1.0))
    throw std::invalid_argument("make_dnwr_bound_params: theta_star must lie in (0, 1)");
  DnwrBoundParams p;
  p.nu = nu;
  p.A = A;
  p.B = B;
  p.theta_star = theta_star;
  p.horizon = horizon;
  double Lam = lambda_constant(nu);
  double beta = beta_of(nu);
  double Tn = std::pow(horizon, nu);
  p.mu1 = Lam * std::pow(B / Tn, beta);
  p.C = std::max(A, B);
  p.D = std::min(A, B);
  p.mu2 = Lam * std::pow(p.D / Tn, beta);
  p.delta = Lam * std::pow(2.0 * std::abs(A - B) / Tn, beta);
  p.c = floor_inverse_complement(nu);
  return p;
}

double dnwr_bound(const DnwrBoundParams& p, std::size_t k, DnwrCase kind) {
  if (kind == DnwrCase::Sub && p.nu > 0.5) throw std::invalid_argument("dnwr_bound: sub-diffusion case needs nu <= 1/2");
  if (kind == DnwrCase::Wave && p.nu <= 0.5) throw std::invalid_argument("dnwr_bound: wave case needs nu > 1/2");
  if (k == 0) return 1.0;
  double beta = beta_of(p.nu);
  if (kind == DnwrCase::Sub) {
    if (p.A >= p.B) {
      double kk = static_cast<double>(k);
      return std::pow(2.0 * p.theta_star * (p.A - p.B) / p.A, kk) * std::exp(-p.mu1 * std::pow(kk, beta));
    }
    std::size_t even = k - (k % 2);
    if (even == 0) return 1.0;
    double ke = static_cast<double>(even);
    double base = 2.0 * std::sqrt(2.0) * p.theta_star / (1.0 - std::exp(-2.0 * p.mu1));
    return std::pow(base, ke) * std::exp(-p.mu1 * std::pow(ke, beta));
  }
  double kk = static_cast<double>(k);
  double base = 2.0 * p.theta_star * (1.0 + std::exp(-p.delta)) /
                ((1.0 - std::exp(-p.mu2 * p.beta1(k))) * (1.0 - std::exp(-p.mu2 * p.beta2(k))));
  return std::pow(base, kk) * std::exp(-2.0 * p.mu2 * std::pow(kk, beta));
}

NnwrBoundParams make_nnwr_bound_params(double nu, std::span<const double> widths, std::span<const double> kappas,
                                       double horizon, std::span<const double> theta, QConstant reading) {
  require_alpha(nu, "make_nnwr_bound_params");
  require_positive(horizon, "horizon", "make_nnwr_bound_params");
  const std::size_t N = widths.size();
  if (N < 2) throw std::invalid_argument("make_nnwr_bound_params: need at least two subdomains");
  if (kappas.size() != N) throw std::invalid_argument("make_nnwr_bound_params: one kappa per subdomain");
  if (!theta.empty() && theta.size() != N - 1)
    throw std::invalid_argument("make_nnwr_bound_params: one theta per interface");

  NnwrBoundParams p;
  p.nu = nu;
  p.horizon = horizon;
  p.reading = reading;
  p.kappas.assign(kappas.begin(), kappas.end());
  for (std::size_t i = 0; i < N; ++i) {
    require_positive(widths[i], "width", "make_nnwr_bound_params");
    require_positive(kappas[i], "kappa", "make_nnwr_bound_params");
    p.lengths.push_back(widths[i] / std::sqrt(kappas[i]));
  }
  for (std::size_t i = 0; i + 1 < N; ++i)
    p.theta.push_back(theta.empty() ? optimal_theta_nnwr(kappas[i], kappas[i + 1]) : theta[i]);

  const double beta = beta_of(nu);
  const double Tn = std::pow(horizon, nu);
  const double Lam = lambda_constant(nu);
  p.h_min = *std::min_element(p.lengths.begin(), p.lengths.end()) / 2.0;
  p.mu = Lam * std::pow(p.h_min / Tn, beta);
  p.q = reading == QConstant::Lambda ? Lam : p.mu;
  p.D = Tn * std::tgamma(2.0 - nu) / (2.0 * std::pow(p.q, 1.0 - nu));

  // 1-based subdomain indices from here on
  auto l = [&](std::size_t j) { return p.lengths[j - 1]; };
  auto kap = [&](std::size_t j) { return p.kappas[j - 1]; };
  auto g = [&](std::size_t j) { return 1.0 + p.D / l(j); };
  auto Qexp = [&](double base) {
    if (base < 0.0) {
      p.applicable = false;
      return 0.0;
    }
    return p.q * std::pow(base / Tn, beta);
  };
  auto Q = [&](std::size_t j) { return Qexp(l(j) - p.h_min); };
  auto Qh = [&](std::size_t j) { return Qexp(l(j) / 2.0 - p.h_min); };
  auto Qhk = [&](std::size_t j, std::size_t m) { return Qexp(l(j) / 2.0 + l(m) - p.h_min); };
  auto r = [&](std::size_t a, std::size_t b) { return std::sqrt(kap(a) / kap(b)); };

  p.W.assign(N - 1, {0.0, 0.0, 0.0, 0.0, 0.0});
  p.c_i.assign(N - 1, 0.0);
  for (std::size_t i = 1; i <= N - 1; ++i) {
    auto& w = p.W[i - 1];
    w[2] = 2.0 * (r(i, i + 1) + r(i + 1, i)) * g(i) * g(i + 1) *
           (std::exp(-2.0 * Q(i)) + std::exp(-2.0 * Q(i + 1)));
    if (i + 1 <= N - 1) {
      std::size_t j = i + 1;
      w[3] = 2.0 * g(i + 1) *
             (r(i + 2, i + 1) * g(i + 2) * (std::exp(-2.0 * Qh(j)) + std::exp(-2.0 * Qhk(j, i + 2))) +
              r(i + 1, i) * g(i) * (std::exp(-2.0 * Qh(j)) + std::exp(-2.0 * Qhk(j, i))));
    }
    if (i + 2 <= N - 1)
      w[4] = 4.0 * r(i + 2, i + 1) * g(i + 1) * g(i + 2) * std::exp(-(Q(i + 1) + Q(i + 2)));
    if (i >= 2)
      w[1] = 2.0 * g(i) *
             (r(i - 1, i) * g(i - 1) * (std::exp(-2.0 * Qh(i)) + std::exp(-2.0 * Qhk(i, i - 1))) +
              r(i, i + 1) * g(i + 1) * (std::exp(-2.0 * Qh(i)) + std::exp(-2.0 * Qhk(i, i + 1))));
    if (i >= 3) w[0] = 4.0 * r(i - 1, i) * g(i - 1) * g(i) * std::exp(-(Q(i - 1) + Q(i)));
    for (double v : w) p.c_i[i - 1] += v;
    p.c = std::max(p.c, p.theta[i - 1] * p.c_i[i - 1]);
  }
  return p;
}

std::optional<double> nnwr_bound(const NnwrBoundParams& p, std::size_t k) {
  if (k == 0) return 1.0;
  if (!p.applicable) return std::nullopt;
  double kk = static_cast<double>(k);
  return std::pow(p.c, kk) * std::exp(-p.mu * std::pow(2.0 * kk, beta_of(p.nu)));
}

double Nnwr2dBoundParams::F(std::size_t k) const {
  return bracket_exponent(2.0 * std::max(A, B) / std::min(A, B), k, c, nu);
}
double Nnwr2dBoundParams::H(std::size_t k) const { return bracket_exponent(2.0, k, c, nu); }

Nnwr2dBoundParams make_nnwr2d_bound_params(double nu, double A, double B, double horizon) {
  require_alpha(nu, "make_nnwr2d_bound_params");
  require_positive(A, "A", "make_nnwr2d_bound_params");
  require_positive(B, "B", "make_nnwr2d_bound_params");
  require_positive(horizon, "horizon", "make_nnwr2d_bound_params");
  Nnwr2dBoundParams p;
  p.nu = nu;
  p.A = A;
  p.B = B;
  p.horizon = horizon;
  p.P = time_constant(nu, horizon);
  p.E = std::pow(2.0 * std::min(A, B), beta_of(nu));
  p.Lambda = lambda_constant(nu);
  p.c = floor_inverse_complement(nu);
  if (nu > 0.5) {
    double thr = std::pow(nu, 1.0 - nu) * std::pow(horizon, nu) /
                 (std::pow(1.0 - nu, 1.0 - nu) * std::pow(nu, nu));
    p.K = static_cast<std::size_t>(std::floor(thr / B));
  }
  return p;
}

std::optional<double> nnwr2d_bound(const Nnwr2dBoundParams& p, std::size_t k) {
  if (k == 0) return 1.0;
  if (p.nu > 0.5 && k <= p.K) return std::nullopt;
  double beta = beta_of(p.nu);
  double kk = static_cast<double>(k);
  double num = 1.0 + std::exp(-p.P * std::pow(2.0 * std::abs(p.B - p.A), beta));
  double den = (1.0 - std::exp(-p.P * p.E * p.F(k))) * (1.0 - std::exp(-p.P * p.E * p.H(k)));
  return std::pow(num * num / den, kk) * std::exp(-2.0 * p.P * p.E * std::pow(kk, beta));
}

}  // namespace fwr
