#pragma once

#include <cstdint>

#include "nlcsbp/rng.hpp"

namespace nlcsbp {

// P(chi_alpha > z): chi_alpha = 1 / Beta(alpha, 1 - alpha) on [1, inf); alpha = 0 means chi = inf, alpha = 1 means chi = 1.
double chi_tail(double alpha, double z);
double chi_density(double alpha, double z);
double chi_sample(double alpha, RngStream& rng);
// E[exp(-a chi_alpha)].
double chi_laplace(double alpha, double a);

// E[rho_{alpha,beta}^n] for the perpetual integral of a stable subordinator with constant c0.
double rho_moment(double alpha, double beta, double c0, int n);
// Moment generating series of rho_{alpha,beta} under c0 (beta - alpha) = 1, for |theta| < 1/beta.
double rho_mgf(double alpha, double beta, double theta);
// 1 - exp(-t^(1/(1-alpha))), the law of rho_{alpha,1}.
double weibull_cdf(double alpha, double t);
double rho_ldp_rate(double alpha, double beta, double c0);

struct Case1Options {
  double tail_tol = 1e-3;
};

// rho^(1/(beta-alpha)) / chi with rho drawn as a perpetual integral (c0 = 1/(beta-alpha)).
double case1_limit_sample(double alpha, double beta, RngStream& rng, const Case1Options& opts = {});

}  // namespace nlcsbp
