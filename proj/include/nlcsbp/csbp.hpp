#pragma once

#include <cstdint>
#include <vector>

#include "nlcsbp/levy_sim.hpp"
#include "nlcsbp/mechanisms.hpp"

namespace nlcsbp {

// int_0^dt ds / R(level0 + slope s); dt may be infinite.
double eta_increment(const RateFunction& rate, double level0, double slope, double dt);
// Inverse of eta_increment in dt.
double eta_segment_duration(const RateFunction& rate, double level0, double slope, double eta);

struct ExplosionSample {
  double t_inf_estimate;
  double tail_bound;
  std::uint64_t events_used;
  double final_level;
  std::uint64_t restarts;
};

struct PreExplosionSample {
  double t;
  double x_value;
  double renormalized;
  bool at_boundary;
};

// log phi on a uniform grid in log level, for the stopping rule.
class PhiTable {
 public:
  PhiTable(const PhiFunction& phi, double log_level_lo, double step = 0.25);
  // +inf below the table, 0 at an infinite level.
  double operator()(double level) const;

 private:
  double lo_;
  double step_;
  std::vector<double> log_phi_;
};

class ExplosionSimulator {
 public:
  explicit ExplosionSimulator(const Model& model, const SimOptions& opts = {});

  ExplosionSample sample(RngStream& rng, double tail_tol) const;
  // Values X(T_inf - t) for every lookback t from a single path.
  std::vector<PreExplosionSample> sample_pre_explosion(const std::vector<double>& lookbacks, RngStream& rng,
                                                       double tail_tol) const;
  // Same, dividing by the given scales instead of phi^-1(t).
  std::vector<PreExplosionSample> sample_pre_explosion(const std::vector<double>& lookbacks,
                                                       const std::vector<double>& scales, RngStream& rng,
                                                       double tail_tol) const;
  // 4 c1 phi(level), c1 = Gamma(beta - alpha + 1) / Gamma(beta).
  double residual_bound(double level) const;
  const PhiFunction& phi() const { return phi_; }
  const Model& model() const { return model_; }

 private:
  struct Piece {
    double level;
    double slope;
    double eta_start;
    double eta_len;
  };
  ExplosionSample run(RngStream& rng, double tail_tol, double horizon_floor, std::vector<Piece>* record) const;

  Model model_;
  ParentProcess parent_;
  PhiFunction phi_;
  PhiTable table_;
  double c1_;
  double escape_level_;
};

ExplosionSample simulate_explosion(const Model& model, RngStream& rng, double tail_tol, const SimOptions& opts = {});
PreExplosionSample pre_explosion_value(const Model& model, double t, RngStream& rng, double tail_tol,
                                       const SimOptions& opts = {});

// rho^(1/(beta-alpha)) / chi sampler with the perpetual integral simulator built once.
class Case1LimitSampler {
 public:
  Case1LimitSampler(double alpha, double beta, double tail_tol);
  double operator()(RngStream& rng) const;
  double rho(RngStream& rng) const;

 private:
  double alpha_;
  double beta_;
  double tail_tol_;
  ExplosionSimulator sim_;
};

// Classical CSBP (R(y) = y) quantities.
// u_t(lambda) solving int_{u_t}^{lambda} du / psi(u) = t.
double cumulant_u(const BranchingMechanism& mech, double lambda, double t);
double cumulant_u_numeric(const BranchingMechanism& mech, double lambda, double t);
// u_t(0+), finite iff the Dynkin integral converges.
double cumulant_u0(const BranchingMechanism& mech, double t);
double cumulant_u0_numeric(const BranchingMechanism& mech, double t);
ConvergenceResult dynkin_test(const BranchingMechanism& mech);
double classical_explosion_cdf(const BranchingMechanism& mech, double x, double t);
// E_1[int_0^inf S(t)^-beta dt] for a stable subordinator S started at 1.
double expected_eta_via_potential(double alpha, double beta, double c0);

}  // namespace nlcsbp
