#include <doctest.h>

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "nlcsbp/csbp.hpp"
#include "nlcsbp/errors.hpp"
#include "nlcsbp/experiments.hpp"
#include "nlcsbp/limit_laws.hpp"
#include "nlcsbp/quadrature.hpp"
#include "nlcsbp/rng.hpp"

using namespace nlcsbp;

TEST_CASE("chi tail closed forms") {
  CHECK(chi_tail(0.5, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(chi_tail(0.3, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chi_tail(1.0, 2.0) == 0.0);
  for (double z : {1.1, 3.0, 50.0, 1e4})
    CHECK(chi_tail(0.5, z) == doctest::Approx(2 / std::numbers::pi * std::asin(1 / std::sqrt(z))).epsilon(1e-11));
}

TEST_CASE("chi tail against the regularized incomplete beta") {
  // 1/chi is Beta(alpha, 1 - alpha)
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9})
    for (double z : {1.001, 1.5, 2.0, 7.0, 1e3, 1e7})
      CHECK(chi_tail(a, z) == doctest::Approx(boost::math::ibeta(a, 1 - a, 1 / z)).epsilon(1e-10));
}

TEST_CASE("chi density integrates to the tail") {
  const double a = 0.35;
  const double mass = numerics::integrate([&](double z) { return chi_density(a, z); }, 2.0, 5.0).value;
  CHECK(mass == doctest::Approx(chi_tail(a, 2.0) - chi_tail(a, 5.0)).epsilon(1e-8));
}

TEST_CASE("chi samples") {
  RngStream rng(11, 0);
  const int n = 100000;
  std::vector<double> v(n);
  for (auto& x : v) x = chi_sample(0.5, rng);
  CHECK(*std::min_element(v.begin(), v.end()) >= 1.0);
  const double above = std::count_if(v.begin(), v.end(), [](double x) { return x > 2.0; }) / double(n);
  CHECK(std::abs(above - 0.5) < 3 * std::sqrt(0.25 / n));
  std::sort(v.begin(), v.end());
  CHECK(ks_statistic(v, [](double z) { return 1 - chi_tail(0.5, z); }) < 1.36 / std::sqrt(n));
}

TEST_CASE("chi laplace") {
  CHECK(chi_laplace(0.5, 0.0) == doctest::Approx(1.0));
  double prev = 1.0;
  for (double a : {0.1, 0.5, 1.0, 3.0}) {
    const double v = chi_laplace(0.5, a);
    CHECK(v < prev);
    prev = v;
  }
  RngStream rng(12, 0);
  const int n = 100000;
  for (double a : {0.3, 1.0, 2.5}) {
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double e = std::exp(-a * chi_sample(0.5, rng));
      s += e;
      s2 += e * e;
    }
    const double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
    CHECK(std::abs(chi_laplace(0.5, a) - m) < 3 * se);
  }
  // 1/chi is Beta(alpha, 1 - alpha); w = (1 - b)^(1 - alpha) removes the endpoint singularity
  for (double alpha : {0.3, 0.7}) {
    const double a = 0.8;
    const double direct = numerics::integrate(
                              [&](double w) {
                                const double b = 1 - std::pow(w, 1 / (1 - alpha));
                                return b <= 0 ? 0.0 : std::exp(-a / b) * std::pow(b, alpha - 1) / (1 - alpha);
                              },
                              0.0, 1.0, {0.0, 1e-13, 4000})
                              .value /
                          std::beta(alpha, 1 - alpha);
    CHECK(chi_laplace(alpha, a) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("rho moments") {
  CHECK(rho_moment(0.5, 1.5, 1.0, 1) == doctest::Approx(1.1283791671).epsilon(1e-10));
  CHECK(rho_moment(0.0, 1.0, 1.0, 2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rho_moment(0.3, 2.0, 1.7, 0) == 1.0);
  const double m2 = std::tgamma(2) / std::tgamma(1.5) * std::tgamma(3) / std::tgamma(2.5);
  CHECK(rho_moment(0.5, 1.5, 1.0, 2) == doctest::Approx(m2).epsilon(1e-12));
}

TEST_CASE("rho mgf") {
  CHECK(rho_mgf(0.5, 1.5, 0.0) == 1.0);
  CHECK(rho_mgf(0.0, 1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
  const double oracle = numerics::integrate_to_infinity(
                            [](double t) { return 2 * t * std::exp(0.5 * t - t * t); }, 0.0, {0.0, 1e-13, 4000})
                            .value;
  CHECK(rho_mgf(0.5, 1.0, 0.5) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("weibull cdf and ldp rate") {
  CHECK(weibull_cdf(0.5, 0.0) == 0.0);
  CHECK(weibull_cdf(0.5, 1.0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(weibull_cdf(0.0, 2.0) == doctest::Approx(1 - std::exp(-2.0)).epsilon(1e-14));
  CHECK(rho_ldp_rate(0.5, 1.5, 1.0) == doctest::Approx(0.5));
  CHECK(rho_ldp_rate(0.5, 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(rho_ldp_rate(0.3, 1.0, 2.0) == doctest::Approx(rho_ldp_rate(0.3, 1.0, 1.0) * std::pow(2.0, 1 / 0.7)));
  CHECK_THROWS_AS(rho_ldp_rate(0.5, 0.4, 1.0), DomainError);
}

TEST_CASE("case 1 limit samples") {
  RngStream rng(13, 0);
  CHECK(case1_limit_sample(1.0, 2.0, rng) == 1.0);
  const int n = 20000;
  std::vector<double> v(n);
  CHECK(case1_limit_sample(0.5, 1.0, rng) >= 0.0);
  const Case1LimitSampler sampler(0.5, 1.0, Case1Options{}.tail_tol);
  for (auto& x : v) x = sampler(rng);
  CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
  std::sort(v.begin(), v.end());
  CHECK(ks_statistic(v, [](double a) { return a <= 0 ? 0.0 : 1 - chi_laplace(0.5, a); }) <= 0.02);
}
