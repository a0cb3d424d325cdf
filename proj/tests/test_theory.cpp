#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fwr/errors.hpp"
#include "fwr/nnwr.hpp"
#include "fwr/theory.hpp"

using namespace fwr;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// power series of the M-Wright function, fine for moderate x
double mwright_series(double alpha, double x) {
  double sum = 0.0, xn = 1.0, fact = 1.0;
  for (int n = 0; n < 80; ++n) {
    const double g = 1.0 - alpha - alpha * n;
    const bool pole = g <= 0.0 && std::abs(g - std::round(g)) < 1e-14;
    if (!pole) sum += xn / fact / std::tgamma(g);
    xn *= -x;
    fact *= n + 1;
  }
  return sum;
}

double integrate(auto f, double a, double b) {
  static boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, 1e-10);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

// second routine for the NNWR constant: sums W over neighbour offsets
// directly from the symbols of the estimate (Lambda reading)
double nnwr_constant_by_offsets(double nu, const std::vector<double>& h, const std::vector<double>& kap, double T) {
  const std::size_t N = h.size();
  const double beta = 1.0 / (1.0 - nu);
  const double Lam = (1.0 - nu) * std::pow(nu, nu / (1.0 - nu));
  std::vector<double> l(N + 1);
  double hmin = 1e300;
  for (std::size_t j = 1; j <= N; ++j) {
    l[j] = h[j - 1] / std::sqrt(kap[j - 1]);
    hmin = std::min(hmin, l[j] / 2.0);
  }
  const double Tn = std::pow(T, nu);
  const double D = Tn * std::tgamma(2.0 - nu) / (2.0 * std::pow(Lam, 1.0 - nu));
  auto K = [&](std::size_t j) { return kap[j - 1]; };
  auto E = [&](double len) { return std::exp(-2.0 * Lam * std::pow((len - hmin) / Tn, beta)); };
  auto G = [&](std::size_t j) { return 1.0 + D / l[j]; };
  double c = 0.0;
  for (std::size_t i = 1; i < N; ++i) {
    double ci = 2.0 * (std::sqrt(K(i) / K(i + 1)) + std::sqrt(K(i + 1) / K(i))) * G(i) * G(i + 1) *
                (E(l[i]) + E(l[i + 1]));
    for (int off : {-2, -1, 1, 2}) {
      const long target = static_cast<long>(i) + off;
      if (target < 1 || target > static_cast<long>(N) - 1) continue;
      if (off == 1) {
        const std::size_t j = i + 1;
        ci += 2.0 * G(j) *
              (std::sqrt(K(i + 2) / K(j)) * G(i + 2) * (E(l[j] / 2) + E(l[j] / 2 + l[i + 2])) +
               std::sqrt(K(j) / K(i)) * G(i) * (E(l[j] / 2) + E(l[j] / 2 + l[i])));
      } else if (off == -1) {
        ci += 2.0 * G(i) *
              (std::sqrt(K(i - 1) / K(i)) * G(i - 1) * (E(l[i] / 2) + E(l[i] / 2 + l[i - 1])) +
               std::sqrt(K(i) / K(i + 1)) * G(i + 1) * (E(l[i] / 2) + E(l[i] / 2 + l[i + 1])));
      } else if (off == 2) {
        ci += 4.0 * std::sqrt(K(i + 2) / K(i + 1)) * G(i + 1) * G(i + 2) *
              std::sqrt(E(l[i + 1]) * E(l[i + 2]));
      } else {
        ci += 4.0 * std::sqrt(K(i - 1) / K(i)) * G(i - 1) * G(i) * std::sqrt(E(l[i - 1]) * E(l[i]));
      }
    }
    c = std::max(c, optimal_theta_nnwr(K(i), K(i + 1)) * ci);
  }
  return c;
}

}  // namespace

TEST_CASE("u_phi values, lower bound and endpoint limits") {
  CHECK(u_phi(0.5, kPi / 2) == doctest::Approx(0.5).epsilon(1e-14));
  for (double a = 0.1; a < 0.95; a += 0.1) {
    const double lam = lambda_constant(a);
    for (double phi = 0.01; phi < kPi - 0.005; phi += 0.01) CHECK(u_phi(a, phi) >= lam * (1.0 - 1e-12));
    // finite limit at 0 equals the minimum; extrapolate from small phi
    const double u1 = u_phi(a, 1e-3), u2 = u_phi(a, 2e-3);
    CHECK(u_phi(a, 0.0) == doctest::Approx((4.0 * u1 - u2) / 3.0).epsilon(1e-9));
    CHECK(u_phi(a, 0.0) == doctest::Approx(lam).epsilon(1e-12));
  }
  CHECK(std::isinf(u_phi(0.5, kPi)));
  CHECK_THROWS_AS(u_phi(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(u_phi(0.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(u_phi(0.5, 4.0), std::invalid_argument);
}

TEST_CASE("M-Wright at alpha = 1/2 is a half Gaussian") {
  CHECK(mwright(0.5, 1.0) == doctest::Approx(0.439391).epsilon(1e-6));
  for (double x = 0.1; x <= 4.0001; x += 0.1)
    CHECK(std::abs(mwright(0.5, x) - std::exp(-x * x / 4.0) / std::sqrt(kPi)) <= 1e-8);
}

TEST_CASE("M-Wright agrees with its power series") {
  for (double a : {0.1, 0.3, 0.7})
    for (double x : {0.05, 0.3, 1.0, 1.5, 2.0}) CHECK(std::abs(mwright(a, x) - mwright_series(a, x)) <= 1e-10);
}

TEST_CASE("M-Wright is a positive probability density") {
  boost::math::quadrature::exp_sinh<double> rule;
  for (double a : {0.3, 0.5, 0.7}) {
    const double mass = rule.integrate([&](double x) { return mwright(a, x); }, 1e-10);
    CHECK(std::abs(mass - 1.0) <= 1e-6);
    for (double x : {0.01, 0.5, 1.0, 3.0, 6.0}) CHECK(mwright(a, x) > 0.0);
    // tail mass matches direct integration of the density
    for (double x0 : {0.3, 1.0, 2.0}) {
      const double direct = rule.integrate([&](double x) { return mwright(a, x0 + x); }, 1e-12);
      CHECK(mwright_tail(a, x0) == doctest::Approx(direct).epsilon(1e-8));
    }
  }
  CHECK(mwright_tail(0.5, 0.0) == 1.0);
  CHECK(mwright_tail(0.5, 1.3) == doctest::Approx(std::erfc(0.65)).epsilon(1e-12));
  CHECK_THROWS_AS(mwright(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mwright(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(mwright(1.5, 1.0), std::invalid_argument);
}

TEST_CASE("exponential kernel matches the classical pair at alpha = 1/2") {
  CHECK(invlap_exp_kernel(0.5, 1.0, 1.0) == doctest::Approx(0.219695).epsilon(1e-6));
  for (double l : {0.3, 1.0, 2.0})
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
      const double exact = l / (2.0 * std::sqrt(kPi * t * t * t)) * std::exp(-l * l / (4.0 * t));
      CHECK(std::abs(invlap_exp_kernel(0.5, l, t) - exact) <= 1e-10);
    }
  CHECK(invlap_exp_kernel(0.5, 1.0, 1e6) < 1e-8);
  CHECK_THROWS_AS(invlap_exp_kernel(0.5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(invlap_exp_kernel(0.5, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("kernel L1 bound dominates the quadrature of the kernel") {
  CHECK(kernel_l1_bound(0.5, 1.0, 1.0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
  CHECK(kernel_l1_bound(0.5, 1e-12, 1.0) == doctest::Approx(1.0));
  for (double a : {0.2, 0.5, 0.8})
    for (double l : {0.25, 1.0, 2.0})
      for (double t : {0.5, 1.0, 4.0}) {
        const double quad = integrate([&](double s) { return s <= 0.0 ? 0.0 : invlap_exp_kernel(a, l, s); }, 0.0, t);
        CHECK(quad == doctest::Approx(kernel_l1_norm(a, l, t)).epsilon(1e-6));
        CHECK(quad <= kernel_l1_bound(a, l, t) + 1e-6);
      }
}

TEST_CASE("Talbot inversion on closed-form pairs") {
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(std::abs(talbot_invert([](cplx s) { return 1.0 / s; }, t) - 1.0) <= 1e-8);
    CHECK(std::abs(talbot_invert([](cplx s) { return 1.0 / (s * s); }, t) - t) <= 1e-8);
  }
  CHECK(std::abs(talbot_invert([](cplx s) { return std::exp(-std::sqrt(s)); }, 1.0) - 0.219695644733861) <= 1e-8);
  for (double a : {0.3, 0.7})
    CHECK(std::abs(talbot_invert([a](cplx s) { return std::exp(-std::pow(s, a)); }, 0.8) -
                   invlap_exp_kernel(a, 1.0, 0.8)) <= 1e-8);
  CHECK_THROWS_AS(talbot_invert([](cplx) { return cplx(NAN, 0.0); }, 1.0), NumericalError);
  CHECK_THROWS_AS(talbot_invert([](cplx s) { return 1.0 / s; }, 0.0), std::invalid_argument);
}

TEST_CASE("sinh and cosh ratio kernels are non-negative") {
  const auto grid = linspace(0.01, 1.0, 100);
  for (double a : {0.2, 0.4, 0.5})
    for (auto [l1, l2] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}})
      for (auto kind : {KernelKind::Phi, KernelKind::Psi}) {
        const auto rep = kernel_positivity_check(kind, a, l1, l2, grid);
        CHECK(rep.min_value >= -1e-8);
        CHECK(rep.values.size() == grid.size());
      }
  const auto zero = kernel_positivity_check(KernelKind::Phi, 0.4, 0.0, 1.0, grid);
  for (double v : zero.values) CHECK(std::abs(v) <= 1e-10);
  CHECK_THROWS_AS(kernel_positivity_check(KernelKind::Phi, 0.6, 0.5, 1.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(kernel_positivity_check(KernelKind::Psi, 0.4, 1.0, 1.0, grid), std::invalid_argument);
}

TEST_CASE("cosech power estimate") {
  for (double a : {0.3, 0.5})
    for (double l : {0.5, 1.0})
      for (std::size_t k : {1, 2, 3}) CHECK(cosech_power_l1(a, l, k, 1.0) <= cosech_power_bound(a, l, k, 1.0));
  // k = 1 and alpha = 1/2 against quadrature of the Talbot-inverted transform
  const auto F = [](cplx s) { return 1.0 / std::sinh(std::sqrt(s)); };
  const double quad = integrate([&](double t) { return t <= 0.0 ? 0.0 : std::abs(talbot_invert(F, t)); }, 0.0, 1.0);
  CHECK(cosech_power_l1(0.5, 1.0, 1, 1.0) == doctest::Approx(quad).epsilon(1e-6));
}

TEST_CASE("sinh ratio power estimate") {
  for (double a : {0.3, 0.5})
    for (auto [l1, l2] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}})
      for (std::size_t k : {1, 2, 3})
        CHECK(sinh_ratio_power_l1(a, l1, l2, k, 1.0) <= sinh_ratio_power_bound(a, l1, l2, k, 1.0));
  // pointwise series against Talbot
  const auto F = [](cplx s) {
    const cplx z = std::pow(s, 0.4);
    return std::pow(std::sinh(0.5 * z) / std::sinh(1.5 * z), 2.0);
  };
  for (double t : {0.2, 0.6, 1.0})
    CHECK(std::abs(sinh_ratio_power_kernel(0.4, 1.0, 1.5, 2, t) - talbot_invert(F, t)) <= 1e-8);
}

TEST_CASE("geometric kernel estimate") {
  for (double a : {0.3, 0.5, 0.7})
    for (auto [l1, l2] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}}) {
      const double tal = geometric_kernel_l1_talbot(a, l1, l2, 1.0);
      CHECK(tal == doctest::Approx(geometric_kernel_l1_series(a, l1, l2, 1.0)).epsilon(1e-6));
      CHECK(tal <= geometric_kernel_bound(a, l1, l2, 1.0));
    }
}

TEST_CASE("DNWR estimate values") {
  const auto p = make_dnwr_bound_params(0.25, 1.5, 1.0, 1.0 / 3.0, 1.0);
  CHECK(p.mu1 == doctest::Approx(0.47247).epsilon(1e-5));
  CHECK(dnwr_bound(p, 0, DnwrCase::Sub) == 1.0);
  CHECK(dnwr_bound(p, 1, DnwrCase::Sub) == doctest::Approx(0.1386).epsilon(1e-3));
  CHECK(p.c == 1);
  CHECK(p.C == 1.5);
  CHECK(p.D == 1.0);
  CHECK_THROWS_AS(dnwr_bound(p, 1, DnwrCase::Wave), std::invalid_argument);
  const auto w = make_dnwr_bound_params(0.75, 1.5, 1.0, 1.0 / 3.0, 1.0);
  CHECK_THROWS_AS(dnwr_bound(w, 1, DnwrCase::Sub), std::invalid_argument);
  CHECK(w.c == 4);
  CHECK(w.beta1(2) > 0.0);
  CHECK(w.beta2(2) > 0.0);
  // A < B: odd k repeat the preceding even value
  const auto q = make_dnwr_bound_params(0.25, 0.5, 3.0, 1.0 / 3.0, 1.0);
  CHECK(dnwr_bound(q, 1, DnwrCase::Sub) == 1.0);
  CHECK(dnwr_bound(q, 3, DnwrCase::Sub) == dnwr_bound(q, 2, DnwrCase::Sub));
  CHECK_THROWS_AS(make_dnwr_bound_params(0.25, 0.0, 1.0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("estimates decay beyond the first iteration") {
  for (auto [A, B] : {std::pair{1.5, 1.0}, std::pair{0.5, 3.0}})
    for (double order : {0.2, 0.5, 0.8, 1.2, 1.5, 1.8}) {
      const double nu = order / 2.0;
      const auto kind = nu <= 0.5 ? DnwrCase::Sub : DnwrCase::Wave;
      const auto p = make_dnwr_bound_params(nu, A, B, 1.0 / 3.0, 1.0);
      for (std::size_t k = 2; k < 10; ++k) CHECK(dnwr_bound(p, k + 1, kind) <= dnwr_bound(p, k, kind));
    }
  for (std::size_t N : {4, 8})
    for (double order : {0.2, 0.5, 0.8}) {
      std::vector<double> h(N, 16.0 / N), kap;
      for (std::size_t i = 0; i < N; ++i) kap.push_back(std::pow(4.0, -double(std::min(i, N - 1 - i))));
      const auto p = make_nnwr_bound_params(order / 2.0, h, kap, 1.0);
      for (std::size_t k = 2; k < 10; ++k) CHECK(*nnwr_bound(p, k + 1) <= *nnwr_bound(p, k));
    }
}

TEST_CASE("NNWR estimate against a second evaluation") {
  {
    const std::vector<double> h{1.0, 1.0}, kap{1.0, 1.0};
    const auto p = make_nnwr_bound_params(0.25, h, kap, 1.0);
    CHECK(p.c == doctest::Approx(nnwr_constant_by_offsets(0.25, h, kap, 1.0)).epsilon(1e-13));
    CHECK(p.W[0][1] == 0.0);
    CHECK(p.W[0][3] == 0.0);
    CHECK(*nnwr_bound(p, 0) == 1.0);
    for (std::size_t k = 1; k <= 5; ++k)
      CHECK(*nnwr_bound(p, k) ==
            doctest::Approx(std::pow(p.c, double(k)) * std::exp(-p.mu * std::pow(2.0 * k, 1.0 / 0.75))));
  }
  const std::vector<std::vector<double>> widths{{3.2, 3.2, 3.2, 3.2, 3.2}, {3.5, 2.0, 4.5, 2.0, 4.0}};
  const std::vector<std::vector<double>> kappas{{1, 1, 1, 1, 1}, {0.25, 1, 0.25, 4, 1}};
  for (const auto& h : widths)
    for (const auto& kap : kappas)
      for (double nu : {0.25, 0.75}) {
        const auto p = make_nnwr_bound_params(nu, h, kap, 4.0);
        CHECK(p.applicable);
        for (const auto& row : p.W)
          for (double v : row) CHECK(v >= 0.0);
        CHECK(p.c >= 0.0);
        CHECK(p.c == doctest::Approx(nnwr_constant_by_offsets(nu, h, kap, 4.0)).epsilon(1e-12));
      }
}

TEST_CASE("NNWR estimate options and errors") {
  const std::vector<double> h{2.0, 2.0, 2.0}, kap{1.0, 0.25, 1.0};
  const auto lam = make_nnwr_bound_params(0.25, h, kap, 2.0);
  const auto mu = make_nnwr_bound_params(0.25, h, kap, 2.0, {}, QConstant::Mu);
  CHECK(lam.mu == mu.mu);
  CHECK(lam.q != mu.q);
  CHECK(lam.theta[0] == doctest::Approx(optimal_theta_nnwr(1.0, 0.25)));
  const std::vector<double> th{0.2, 0.3};
  CHECK(make_nnwr_bound_params(0.25, h, kap, 1.0, th).theta[1] == 0.3);
  CHECK_THROWS_AS(make_nnwr_bound_params(0.25, std::vector<double>{1.0}, std::vector<double>{1.0}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_nnwr_bound_params(0.25, h, std::vector<double>{1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_nnwr_bound_params(0.25, h, kap, 1.0, std::vector<double>{0.2}), std::invalid_argument);
}

TEST_CASE("2D estimate") {
  const auto p = make_nnwr2d_bound_params(0.25, 0.5, 1.5, 1.0);
  CHECK(*nnwr2d_bound(p, 0) == 1.0);
  {
    // written out by hand for k = 2
    const double beta = 4.0 / 3.0;
    const double P = 0.75 * std::pow(0.25, 1.0 / 3.0);
    const double E = std::pow(1.0, beta);
    const double F = std::pow(6.0 + 2.0 - 2.0, 1.0 / 0.75);
    const double H = std::pow(4.0 - 2.0, 1.0 / 0.75);
    const double num = std::pow(1.0 + std::exp(-P * std::pow(2.0, beta)), 2.0);
    const double den = (1.0 - std::exp(-P * E * F)) * (1.0 - std::exp(-P * E * H));
    const double expect = std::pow(num / den, 2.0) * std::exp(-2.0 * P * E * std::pow(2.0, beta));
    CHECK(*nnwr2d_bound(p, 2) == doctest::Approx(expect).epsilon(1e-13));
  }
  {
    const auto e = make_nnwr2d_bound_params(0.25, 1.0, 1.0, 1.0);
    const double den = (1.0 - std::exp(-e.P * e.E * e.F(1))) * (1.0 - std::exp(-e.P * e.E * e.H(1)));
    CHECK(*nnwr2d_bound(e, 1) == doctest::Approx(4.0 / den * std::exp(-2.0 * e.P * e.E)).epsilon(1e-13));
  }
  const auto w = make_nnwr2d_bound_params(0.75, 0.5, 0.5, 1.0);
  const double thr = std::pow(0.75, 0.25) / (std::pow(0.25, 0.25) * std::pow(0.75, 0.75));
  CHECK(w.K == static_cast<std::size_t>(std::floor(thr / 0.5)));
  CHECK_FALSE(nnwr2d_bound(w, w.K).has_value());
  CHECK(nnwr2d_bound(w, w.K + 1).has_value());
  CHECK(p.K == 0);
}

TEST_CASE("floor of 1/(1-nu) is robust to roundoff") {
  CHECK(floor_inverse_complement(0.9) == 10);
  CHECK(floor_inverse_complement(0.75) == 4);
  CHECK(floor_inverse_complement(0.6) == 2);
  CHECK(floor_inverse_complement(0.25) == 1);
  CHECK(floor_inverse_complement(0.5) == 2);
}
