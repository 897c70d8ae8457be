#include <doctest.h>

#include <cmath>
#include <limits>

#include "nlcsbp/csbp.hpp"
#include "nlcsbp/errors.hpp"
#include "nlcsbp/limit_laws.hpp"

using namespace nlcsbp;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("eta increments") {
  CHECK(eta_increment(RateFunction(1, 2), 1.0, 1.0, kInf) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eta_increment(RateFunction(2, 1.5), 3.0, 0.0, 0.7) == doctest::Approx(0.7 / (2 * std::pow(3.0, 1.5))));
  CHECK(eta_increment(RateFunction(1, 1), 2.0, 0.5, 3.0) == doctest::Approx(std::log(1 + 0.5 * 3.0 / 2.0) / 0.5).epsilon(1e-14));
  for (double beta : {0.5, 1.0, 1.7}) {
    const RateFunction r(1.3, beta);
    const double e = eta_increment(r, 2.0, 0.8, 1.25);
    CHECK(eta_segment_duration(r, 2.0, 0.8, e) == doctest::Approx(1.25).epsilon(1e-12));
  }
}

TEST_CASE("pure drift explosion is deterministic") {
  const Model m(PureDriftSubordinator{1}, RateFunction(1, 2), 1.0);
  RngStream rng(31, 0);
  CHECK(simulate_explosion(m, rng, 1e-6).t_inf_estimate == doctest::Approx(1.0).epsilon(1e-12));
  const auto p = pre_explosion_value(m, 0.1, rng, 1e-6);
  CHECK(p.x_value == doctest::Approx(10.0).epsilon(1e-12));
  const auto b = pre_explosion_value(m, 2.0, rng, 1e-6);
  CHECK(b.at_boundary);
  CHECK(b.x_value == 1.0);
}

TEST_CASE("stopping rule contract") {
  const Model m(StableSubordinator{1, 0.5}, RateFunction(1, 1), 1.0);
  const ExplosionSimulator sim(m);
  for (int i = 0; i < 200; ++i) {
    RngStream rng(32, i);
    const auto s = sim.sample(rng, 1e-3);
    CHECK(s.tail_bound <= 1e-3 * s.t_inf_estimate);
  }
  CHECK_THROWS_AS(ExplosionSimulator(Model(StableSubordinator{1, 0.7}, RateFunction(1, 0.5), 1.0)), ContractError);
}

TEST_CASE("cumulant closed forms") {
  const BranchingMechanism st(StableSubordinator{1, 0.5});
  CHECK(cumulant_u(st, 1.7, 0.0) == doctest::Approx(1.7));
  CHECK(cumulant_u(st, 1.0, 1.0) == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(cumulant_u(PureDriftSubordinator{0.5}, 2.0, 3.0) == doctest::Approx(2.0 * std::exp(1.5)).epsilon(1e-14));
  for (const BranchingMechanism m : {st, BranchingMechanism(PureDriftSubordinator{0.5})})
    for (double t : {0.1, 1.0, 2.5}) CHECK(cumulant_u_numeric(m, 0.3, t) == doctest::Approx(cumulant_u(m, 0.3, t)).epsilon(1e-9));
  CHECK(cumulant_u0(st, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cumulant_u0(st, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(cumulant_u0_numeric(st, 1.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK_THROWS_AS(cumulant_u0(PureDriftSubordinator{1}, 1.0), NonExplosiveError);
}

TEST_CASE("Dynkin test and Stieltjes test agree") {
  CHECK(dynkin_test(StableSubordinator{1, 0.5}).converged);
  CHECK_FALSE(dynkin_test(PureDriftSubordinator{1}).converged);
  for (const BranchingMechanism m :
       {BranchingMechanism(StableSubordinator{1, 0.5}), BranchingMechanism(PureDriftSubordinator{1}),
        BranchingMechanism(LogTailSubordinator{2}), BranchingMechanism(LogCriticalSubordinator{2}),
        BranchingMechanism(LogCriticalSubordinator{0})})
    CHECK(dynkin_test(m).converged == explosion_test_stieltjes(Model(m, RateFunction(1, 1), 1.0)).converged);
}

TEST_CASE("classical explosion cdf") {
  const BranchingMechanism st(StableSubordinator{1, 0.5});
  CHECK(classical_explosion_cdf(st, 1.0, 0.0) == 0.0);
  CHECK(classical_explosion_cdf(st, 1.0, 2.0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(classical_explosion_cdf(st, 3.0, 1.0) == doctest::Approx(1 - std::exp(-0.75)).epsilon(1e-12));
}

TEST_CASE("mean perpetual integral via the potential measure") {
  CHECK(expected_eta_via_potential(0.5, 1.5, 1.0) == doctest::Approx(1.1283791671).epsilon(1e-10));
  for (double a : {0.2, 0.5, 0.8})
    for (double b : {a + 0.1, 1.0 + a, 3.0})
      CHECK(expected_eta_via_potential(a, b, 1.3) == doctest::Approx(rho_moment(a, b, 1.3, 1)).epsilon(1e-12));
  double prev = kInf;
  for (double b = 1.0; b < 40; b += 3) {
    const double v = expected_eta_via_potential(0.5, b, 1.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 0.2);
}
