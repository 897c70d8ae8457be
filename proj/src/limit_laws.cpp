#include "nlcsbp/limit_laws.hpp"

#include <cmath>
#include <numbers>

#include "nlcsbp/csbp.hpp"
#include "nlcsbp/errors.hpp"
#include "nlcsbp/quadrature.hpp"

namespace nlcsbp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha_closed(double alpha) {
  if (!(alpha >= 0 && alpha <= 1)) throw DomainError("alpha must lie in [0, 1]");
}

void check_alpha_open(double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0, 1)");
}

// int_0^upper dw / (1 + w^(1/a))
double arc_integral(double a, double upper) {
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  auto f = [a](double w) { return 1.0 / (1.0 + std::pow(w, 1.0 / a)); };
  if (upper <= 1.0) return numerics::integrate(f, 0.0, upper, opts).value;
  // beyond 1 the integrand decays like w^(-1/a); map w = 1/v
  auto g = [a](double v) { return std::pow(v, 1.0 / a - 2.0) / (std::pow(v, 1.0 / a) + 1.0); };
  return numerics::integrate(f, 0.0, 1.0, opts).value + numerics::integrate(g, 1.0 / upper, 1.0, opts).value;
}

}  // namespace

double chi_tail(double alpha, double z) {
  check_alpha_closed(alpha);
  if (!(z > 0)) throw DomainError("chi_tail: z must be > 0");
  if (z <= 1.0) return 1.0;
  if (alpha == 0.0) return 1.0;
  if (alpha == 1.0) return 0.0;
  if (std::isinf(z)) return 0.0;
  const double k = std::sin(alpha * kPi) / (alpha * kPi);
  if (z >= 2.0) return k * arc_integral(alpha, std::pow(z - 1.0, -alpha));
  return 1.0 - k * (alpha / (1.0 - alpha)) * arc_integral(1.0 - alpha, std::pow(z - 1.0, 1.0 - alpha));
}

double chi_density(double alpha, double z) {
  check_alpha_open(alpha);
  if (z <= 1.0) return 0.0;
  return std::sin(alpha * kPi) / kPi * std::pow(z - 1.0, -alpha) / z;
}

double chi_sample(double alpha, RngStream& rng) {
  check_alpha_open(alpha);
  const double u = rng.uniform();
  // tail is decreasing in x = log(z - 1)
  auto tail_at = [&](double x) { return chi_tail(alpha, 1.0 + std::exp(x)); };
  double lo = -1.0, hi = 1.0;
  while (tail_at(lo) < u) lo -= 2.0 * (1.0 - lo);
  while (tail_at(hi) > u) hi += 2.0 * (1.0 + hi);
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double z = 1.0 + std::exp(x);
    const double f = chi_tail(alpha, z) - u;
    if (f > 0) lo = x;
    else hi = x;
    const double slope = -chi_density(alpha, z) * (z - 1.0);
    double next = slope < 0 ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step < 1e-12 * std::max(1.0, std::abs(x)) || hi - lo < 1e-13) break;
  }
  return 1.0 + std::exp(x);
}

double chi_laplace(double alpha, double a) {
  check_alpha_open(alpha);
  if (!(a >= 0)) throw DomainError("chi_laplace: a must be >= 0");
  if (a == 0.0) return 1.0;
  if (std::isinf(a)) return 0.0;
  // e^-a (1 - int_0^inf e^-x tail(1 + x/a) dx)
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  const double i = numerics::integrate_to_infinity(
                       [&](double x) { return x > 745.0 ? 0.0 : std::exp(-x) * chi_tail(alpha, 1.0 + x / a); }, 0.0,
                       opts)
                       .value;
  return std::exp(-a) * (1.0 - i);
}

double rho_moment(double alpha, double beta, double c0, int n) {
  if (!(alpha >= 0) || !(beta > alpha)) throw DomainError("rho_moment: requires beta > alpha >= 0");
  if (!(c0 > 0)) throw DomainError("rho_moment: c0 must be > 0");
  if (n < 0) throw DomainError("rho_moment: n must be >= 0");
  const double d = beta - alpha;
  double lg = -n * std::log(c0 * d);
  for (int k = 1; k <= n; ++k) lg += std::lgamma(k * d + 1.0) - std::lgamma(k * d + alpha);
  return std::exp(lg);
}

double rho_mgf(double alpha, double beta, double theta) {
  if (!(alpha >= 0) || !(beta > alpha)) throw DomainError("rho_mgf: requires beta > alpha >= 0");
  if (!(std::abs(theta) < 1.0 / beta)) throw DomainError("rho_mgf: requires |theta| < 1/beta");
  if (theta == 0.0) return 1.0;
  const double d = beta - alpha;
  double sum = 1.0;
  double log_abs = 0.0;
  const double lt = std::log(std::abs(theta));
  for (int n = 1; n <= 10000; ++n) {
    log_abs += lt - std::log(static_cast<double>(n)) + std::lgamma(n * d + 1.0) - std::lgamma(n * d + alpha);
    const double term = (theta < 0 && n % 2 == 1 ? -1.0 : 1.0) * std::exp(log_abs);
    sum += term;
    if (std::abs(term) < 1e-14 * std::abs(sum)) break;
  }
  return sum;
}

double weibull_cdf(double alpha, double t) {
  if (!(alpha >= 0 && alpha < 1)) throw DomainError("weibull_cdf: alpha must lie in [0, 1)");
  if (!(t >= 0)) throw DomainError("weibull_cdf: t must be >= 0");
  return -std::expm1(-std::pow(t, 1.0 / (1.0 - alpha)));
}

double rho_ldp_rate(double alpha, double beta, double c0) {
  check_alpha_open(alpha);
  if (!(beta > alpha)) throw DomainError("rho_ldp_rate: requires beta > alpha");
  if (!(c0 > 0)) throw DomainError("rho_ldp_rate: c0 must be > 0");
  return (1.0 - alpha) * std::pow(c0, 1.0 / (1.0 - alpha)) * std::pow(beta - alpha, alpha / (1.0 - alpha));
}

double case1_limit_sample(double alpha, double beta, RngStream& rng, const Case1Options& opts) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("case1_limit_sample: alpha must lie in (0, 1]");
  if (!(beta > alpha)) throw DomainError("case1_limit_sample: requires beta > alpha");
  if (alpha == 1.0) return 1.0;
  const Case1LimitSampler sampler(alpha, beta, opts.tail_tol);
  return sampler(rng);
}

}  // namespace nlcsbp
