#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "nlcsbp/errors.hpp"
#include "nlcsbp/experiments.hpp"
#include "nlcsbp/levy_sim.hpp"

using namespace nlcsbp;

namespace {

// xi(horizon) started at x0, landing exactly on the horizon
double value_at(const BranchingMechanism& m, double x0, double horizon, RngStream& rng, const SimOptions& opts = {}) {
  PathState s{0.0, x0, 0.0};
  while (true) {
    const double left = horizon - s.time;
    auto [next, ev] = next_event(m, s, left, rng, opts);
    if (ev.kind == EventKind::GridStep) return next.value;
    s = next;
  }
}

}  // namespace

TEST_CASE("stable positive sample Laplace transform") {
  RngStream rng(21, 0);
  const int n = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = stable_positive_sample(0.5, 1.0, 1.0, rng);
    REQUIRE(x > 0);
    const double e = std::exp(-2 * x);
    s += e;
    s2 += e * e;
  }
  const double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
  CHECK(std::abs(m - std::exp(-std::sqrt(2.0))) < 3 * se);
}

TEST_CASE("stable scaling in law") {
  RngStream rng(22, 0);
  const int n = 20000;
  std::vector<double> a(n), b(n);
  for (auto& x : a) x = stable_positive_sample(0.5, 1.0, 1.0, rng);
  for (auto& x : b) x = stable_positive_sample(0.5, 1.0, 2.0, rng) / std::pow(2.0, 1 / 0.5);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(ks_two_sample(a, b) <= 0.02);
}

TEST_CASE("event simulation matches the exact stable marginal") {
  // truncated-jump scheme vs the direct one-sided stable variate
  const BranchingMechanism m(StableSubordinator{1.0, 0.5});
  RngStream r1(23, 0), r2(23, 1);
  const int n = 20000;
  std::vector<double> a(n), b(n);
  for (auto& x : a) x = value_at(m, 0.0, 1.0, r1);
  for (auto& x : b) x = stable_positive_sample(0.5, 1.0, 1.0, r2);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(ks_two_sample(a, b) <= 1.36 * std::sqrt(2.0 / n));
}

TEST_CASE("tail inverse jumps") {
  const BranchingMechanism lt(LogTailSubordinator{2});
  CHECK(tail_inverse_jump_sample(lt, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(tail_inverse_jump_sample(lt, 0.25) == doctest::Approx(std::exp(2.0) - std::exp(1.0)).epsilon(1e-13));
  for (double g : {0.0, 0.5, 2.0, 5.0}) {
    const BranchingMechanism lc(LogCriticalSubordinator{g});
    for (double u : {0.9, 0.5, 1e-3, 1e-9}) {
      const double z = tail_inverse_jump_sample(lc, u);
      CHECK(lc.tail(z) / lc.total_jump_rate() == doctest::Approx(u).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(tail_inverse_jump_sample(lt, 0.0), DomainError);
  CHECK_THROWS_AS(tail_inverse_jump_sample(BranchingMechanism(StableSubordinator{1, 0.5}), 0.5), DomainError);
}

TEST_CASE("next event") {
  RngStream rng(24, 0);
  const auto [s, ev] = next_event(PureDriftSubordinator{1}, PathState{0, 1, 0}, 2.0, rng);
  CHECK(s.value == doctest::Approx(3.0));
  CHECK(ev.kind == EventKind::GridStep);
  CHECK_THROWS_AS(next_event(PureDriftSubordinator{1}, PathState{0, 1, 0}, 0.0, rng), DomainError);

  const BranchingMechanism lt(LogTailSubordinator{2});
  const int n = 100000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    auto [st, e] = next_event(lt, PathState{0, 1, 0}, 1e300, rng);
    REQUIRE(e.kind == EventKind::Jump);
    sum += st.time;
    sum2 += st.time * st.time;
  }
  const double m = sum / n, se = std::sqrt((sum2 / n - m * m) / n);
  CHECK(std::abs(m - 1.0) < 3 * se);

  const BranchingMechanism smd(StableMinusDrift{1, 0.5, 1});
  const ParentProcess pp(smd);
  for (int i = 0; i < 200; ++i) {
    auto [st, e] = next_event(smd, PathState{0, 5, 0}, 1e-6, rng);
    if (e.kind != EventKind::GridStep) continue;
    const double drift = pp.small_jump_drift(pp.cutoff(5.0)) - 1.0;
    CHECK(st.value == doctest::Approx(5.0 + drift * 1e-6).epsilon(1e-15));
  }
}

TEST_CASE("first passage above") {
  RngStream rng(25, 0);
  const auto above = simulate_until_level(StableSubordinator{1, 0.5}, 20.0, 10.0, rng);
  CHECK(above.tau_plus == 0.0);
  CHECK(above.pre_value == 20.0);
  CHECK(above.post_value == 20.0);
  const auto creep = simulate_until_level(PureDriftSubordinator{1}, 1.0, 3.0, rng);
  CHECK(creep.tau_plus == doctest::Approx(2.0));
  CHECK(creep.post_value == 3.0);
}

TEST_CASE("first passage below") {
  RngStream rng(26, 0);
  const BranchingMechanism smd(StableMinusDrift{1, 0.5, 1});
  CHECK_THROWS_AS(first_passage_down(smd, 0.5, 1.0, 10.0, rng), DomainError);
  CHECK_FALSE(first_passage_down(StableSubordinator{1, 0.5}, 2.0, 1.0, 10.0, rng).has_value());
  const int n = 4000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    RngStream r(27, i);
    hits += first_passage_down(smd, 1.0 + 1e-9, 1.0, 1e12, r).has_value();
  }
  CHECK(hits > 0.99 * n);
}

TEST_CASE("path dump round trip") {
  RngStream rng(28, 0);
  const auto path = simulate_path(LogTailSubordinator{2}, 1.0, 5.0, 0.5, rng);
  REQUIRE(!path.empty());
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  write_path_dump(ss, path);
  CHECK(ss.str().size() == 8 + 25 * path.size());
  CHECK(read_path_dump(ss) == path);
  std::stringstream bad(ss.str().substr(0, 20));
  CHECK_THROWS_AS(read_path_dump(bad), IoError);
}
