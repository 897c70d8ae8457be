#include "nlcsbp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nlcsbp/csbp.hpp"
#include "nlcsbp/errors.hpp"
#include "nlcsbp/limit_laws.hpp"
#include "nlcsbp/quadrature.hpp"
#include "nlcsbp/report.hpp"

namespace nlcsbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// stream ids of different sub-runs inside one experiment never overlap
constexpr std::uint64_t kStreamBlock = std::uint64_t{1} << 40;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

void require_n(const RunSettings& s) {
  if (s.n == 0) throw DomainError("experiment: n must be >= 1");
}

std::string label_t(const std::string& prefix, double t) { return prefix + "_t=" + format_number(t); }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_number(v[i]);
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::QualitativePass:
      return "qualitative-pass";
    case Verdict::QualitativeFail:
      return "qualitative-fail";
  }
  return "fail";
}

bool is_passing(Verdict v) { return v == Verdict::Pass || v == Verdict::QualitativePass; }

bool EstimateEntry::passed() const {
  if (std::isinf(tolerance)) return true;
  return std::abs(value - target) <= tolerance;
}

void ExperimentReport::add_param(const std::string& key, double value) { params.emplace_back(key, format_number(value)); }

void ExperimentReport::finalize() {
  bool ok = true;
  for (const auto& e : estimates) ok = ok && e.passed();
  for (const auto& k : ks) ok = ok && k.passed();
  for (const auto& c : checks) ok = ok && c.passed;
  if (qualitative) verdict = ok ? Verdict::QualitativePass : Verdict::QualitativeFail;
  else verdict = ok ? Verdict::Pass : Verdict::Fail;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw DomainError("ks_statistic: empty sample");
  if (!std::is_sorted(sorted.begin(), sorted.end())) throw DomainError("ks_statistic: samples must be sorted");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  // ties: the empirical CDF jumps once per distinct value
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double f = cdf(sorted[i]);
    d = std::max({d, j / n - f, f - i / n});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile: empty sample");
  const double h = (sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

ExperimentReport run_overshoot_experiment(const BranchingMechanism& mech, double level, const RunSettings& s) {
  require_n(s);
  if (!(level > 0) || !std::isfinite(level)) throw DomainError("overshoot: level must be finite and > 0");
  if (!mech.is_subordinator() && mech.largest_zero() <= 0) throw ContractError("overshoot: the process must drift to +inf");
  Stopwatch sw;
  ExperimentReport r;
  r.name = "overshoot";
  r.seed = s.seed;
  r.n_samples = s.n;
  r.add_param("mechanism", mech.describe());
  r.add_param("level", level);
  r.add_param("relative_jump_cut", s.sim.relative_jump_cut);
  const auto post = parallel_map<double>(s.n, s.workers, [&](std::size_t i) {
    RngStream rng(s.seed, i);
    return simulate_until_level(mech, 0.0, level, rng, s.sim).post_value;
  });
  const double alpha = mech.index();
  if (!mech.has_jumps()) {
    const bool creeping = std::all_of(post.begin(), post.end(), [&](double v) { return v == level; });
    r.checks.push_back({"degenerate_creeping", yes_no(creeping), "yes", creeping});
  } else if (alpha == 0.0) {
    const double psi_level = mech.log_neg_psi(-std::log(level));
    std::vector<double> u;
    u.reserve(post.size());
    for (double v : post) u.push_back(std::isinf(v) ? 0.0 : std::exp(mech.log_neg_psi(-std::log(v)) - psi_level));
    std::sort(u.begin(), u.end());
    r.ks.push_back({"ks_psi_ratio_vs_uniform", ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); }),
                    s.ks_threshold.value_or(0.05), s.n});
  } else if (alpha < 1.0) {
    std::vector<double> z;
    for (double v : post) z.push_back(v / level);
    std::sort(z.begin(), z.end());
    r.ks.push_back({"ks_ratio_vs_chi", ks_statistic(z, [&](double x) { return 1.0 - chi_tail(alpha, x); }),
                    s.ks_threshold.value_or(0.02), s.n});
  } else {
    std::vector<double> z;
    for (double v : post) z.push_back(v / level);
    std::sort(z.begin(), z.end());
    const double med = quantile_sorted(z, 0.5);
    r.qualitative = true;
    r.estimates.push_back({"median_ratio", med, 0.0, 1.0, kInf});
    r.checks.push_back({"median_ratio_in_[1,1.5]", format_number(med), "[1,1.5]", med >= 1.0 && med <= 1.5});
  }
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

ExperimentReport run_rho_experiment(double alpha, double beta, double c0, const RunSettings& s) {
  require_n(s);
  if (!(alpha > 0 && alpha < 1)) throw DomainError("rho: alpha must lie in (0, 1)");
  if (!(beta > alpha)) throw DomainError("rho: requires beta > alpha");
  Stopwatch sw;
  ExperimentReport r;
  r.name = "rho";
  r.seed = s.seed;
  r.n_samples = s.n;
  r.add_param("alpha", alpha);
  r.add_param("beta", beta);
  r.add_param("c0", c0);
  r.add_param("tail_tol", s.tail_tol);
  r.add_param("relative_jump_cut", s.sim.relative_jump_cut);
  const ExplosionSimulator sim(Model(StableSubordinator{c0, alpha}, RateFunction(1.0, beta), 1.0), s.sim);
  const auto eta = parallel_map<double>(s.n, s.workers, [&](std::size_t i) {
    RngStream rng(s.seed, i);
    return sim.sample(rng, s.tail_tol).t_inf_estimate;
  });
  std::vector<double> sq;
  for (double v : eta) sq.push_back(v * v);
  const MeanSe m1 = mean_se(eta);
  const MeanSe m2 = mean_se(sq);
  r.estimates.push_back({"mean", m1.mean, m1.se, rho_moment(alpha, beta, c0, 1), 3.0 * m1.se});
  r.estimates.push_back({"second_moment", m2.mean, m2.se, rho_moment(alpha, beta, c0, 2), 3.0 * m2.se});
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

ExperimentReport run_regime_experiment(const Model& model, SpeedCase which, std::vector<double> t_grid,
                                       const RunSettings& s, const RegimeThresholds& th) {
  require_n(s);
  if (t_grid.empty()) throw DomainError("regime: empty t grid");
  for (double t : t_grid)
    if (!(t > 0)) throw DomainError("regime: lookbacks must be > 0");
  const double a = model.alpha(), b = model.beta();
  const bool match = (which == SpeedCase::Case1 && b > a && a > 0) || (which == SpeedCase::Case2 && a == b) ||
                     (which == SpeedCase::Case3 && a == 0.0 && b > 0);
  if (!match) throw ContractError("regime: the model indices do not match the requested case");
  std::sort(t_grid.begin(), t_grid.end(), std::greater<>());
  Stopwatch sw;
  ExperimentReport r;
  r.name = "regime_case" + std::to_string(static_cast<int>(which));
  r.seed = s.seed;
  r.n_samples = s.n;
  r.qualitative = which != SpeedCase::Case1;
  r.add_param("mechanism", model.mechanism.describe());
  r.add_param("kappa", model.rate.kappa());
  r.add_param("beta", b);
  r.add_param("x0", model.x0);
  r.add_param("t_grid", join(t_grid));
  r.add_param("tail_tol", s.tail_tol);

  const ExplosionSimulator sim(model, s.sim);
  std::vector<double> scales;
  for (double t : t_grid) scales.push_back(sim.phi().inverse(which == SpeedCase::Case2 ? std::tgamma(a) * t : t));
  const auto paths = parallel_map<std::vector<PreExplosionSample>>(s.n, s.workers, [&](std::size_t i) {
    RngStream rng(s.seed, i);
    return sim.sample_pre_explosion(t_grid, scales, rng, s.tail_tol);
  });

  std::vector<double> ks_values, iqrs;
  std::vector<double> limit_draws;
  if (which == SpeedCase::Case1 && b != 1.0) {
    const Case1LimitSampler limit(a, b, s.tail_tol);
    limit_draws = parallel_map<double>(s.n, s.workers, [&](std::size_t i) {
      RngStream rng(s.seed, kStreamBlock + i);
      return a == 1.0 ? 1.0 : limit(rng);
    });
    std::sort(limit_draws.begin(), limit_draws.end());
  }
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    const bool smallest = j + 1 == t_grid.size();
    std::vector<double> v;
    std::uint64_t boundary = 0;
    for (const auto& p : paths) {
      if (p[j].at_boundary) {
        ++boundary;
        continue;
      }
      if (which == SpeedCase::Case3) {
        const auto& mech = model.mechanism;
        v.push_back(std::exp(mech.log_neg_psi(-std::log(scales[j])) - mech.log_neg_psi(-std::log(p[j].x_value))));
      } else {
        v.push_back(p[j].renormalized);
      }
    }
    r.estimates.push_back({label_t("boundary_fraction", t), static_cast<double>(boundary) / s.n, 0.0, 0.0, kInf});
    if (v.empty()) throw DomainError("regime: every path exploded before the lookback");
    std::sort(v.begin(), v.end());
    if (which == SpeedCase::Case1) {
      double d;
      double thr;
      if (b == 1.0) {
        d = ks_statistic(v, [&](double x) { return x <= 0 ? 0.0 : 1.0 - chi_laplace(a, x); });
        thr = th.case1_ks;
      } else {
        d = ks_two_sample(v, limit_draws);
        thr = 1.36 * std::sqrt(2.0 / s.n);
      }
      ks_values.push_back(d);
      r.ks.push_back({label_t("ks_vs_limit", t), d, smallest ? thr : kInf, v.size()});
    } else if (which == SpeedCase::Case3) {
      const double d = ks_statistic(v, [](double x) { return std::clamp(x, 0.0, 1.0); });
      ks_values.push_back(d);
      r.ks.push_back({label_t("ks_psi_ratio_vs_uniform", t), d, smallest ? th.case3_ks : kInf, v.size()});
    } else {
      const double med = quantile_sorted(v, 0.5);
      const double iqr = quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
      iqrs.push_back(iqr);
      r.estimates.push_back({label_t("median_ratio", t), med, 0.0, 1.0, kInf});
      r.estimates.push_back({label_t("iqr_ratio", t), iqr, 0.0, 0.0, kInf});
      if (smallest) {
        const bool in = med >= th.case2_median_lo && med <= th.case2_median_hi;
        r.checks.push_back({label_t("median_in_range", t), format_number(med),
                            "[" + format_number(th.case2_median_lo) + "," + format_number(th.case2_median_hi) + "]", in});
      }
    }
  }
  if (which == SpeedCase::Case2) {
    const bool dec = strictly_decreasing(iqrs);
    r.checks.push_back({"iqr_strictly_decreasing", join(iqrs), "decreasing", dec});
  } else if (t_grid.size() > 1) {
    const bool dec = strictly_decreasing(ks_values);
    r.checks.push_back({"ks_strictly_decreasing", join(ks_values), "decreasing", dec});
  }
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

ExperimentReport run_classical_cdf_experiment(double alpha, double c0, double x0, const std::vector<double>& t_grid,
                                              const RunSettings& s) {
  require_n(s);
  if (t_grid.empty()) throw DomainError("classical cdf: empty t grid");
  Stopwatch sw;
  const BranchingMechanism mech(StableSubordinator{c0, alpha});
  ExperimentReport r;
  r.name = "classical_cdf";
  r.seed = s.seed;
  r.n_samples = s.n;
  r.add_param("alpha", alpha);
  r.add_param("c0", c0);
  r.add_param("x0", x0);
  r.add_param("t_grid", join(t_grid));
  r.add_param("tail_tol", s.tail_tol);

  auto simulate = [&](double start, std::uint64_t block) {
    const ExplosionSimulator sim(Model(mech, RateFunction(1.0, 1.0), start), s.sim);
    auto v = parallel_map<double>(s.n, s.workers, [&](std::size_t i) {
      RngStream rng(s.seed, block * kStreamBlock + i);
      return sim.sample(rng, s.tail_tol).t_inf_estimate;
    });
    std::sort(v.begin(), v.end());
    return v;
  };

  const auto t0 = simulate(x0, 0);
  r.ks.push_back({"ks_tinf_x0=" + format_number(x0),
                  ks_statistic(t0, [&](double t) { return t <= 0 ? 0.0 : classical_explosion_cdf(mech, x0, t); }),
                  s.ks_threshold.value_or(0.02), s.n});
  for (double t : t_grid) {
    const double emp =
        static_cast<double>(std::upper_bound(t0.begin(), t0.end(), t) - t0.begin()) / static_cast<double>(s.n);
    const double exact = classical_explosion_cdf(mech, x0, t);
    const double se = std::sqrt(exact * (1.0 - exact) / s.n);
    r.estimates.push_back({label_t("cdf", t), emp, se, exact, 4.0 * se});
  }
  const Model unit(mech, RateFunction(1.0, 1.0), 1.0);
  const PhiFunction phi(unit);
  std::uint64_t block = 1;
  for (double x : {10.0, 100.0}) {
    const double scale = phi(x);
    auto v = simulate(x, block++);
    for (double& e : v) e /= scale;
    r.ks.push_back({"ks_weibull_x0=" + format_number(x), ks_statistic(v, [&](double t) { return t <= 0 ? 0.0 : weibull_cdf(alpha, t); }),
                    0.03, s.n});
    double gap = 0.0;
    for (int k = 1; k <= 500; ++k) {
      const double t = 0.01 * k;
      gap = std::max(gap, std::abs(classical_explosion_cdf(mech, x, t * scale) - weibull_cdf(alpha, t)));
    }
    r.estimates.push_back({"exact_finite_x_gap_x0=" + format_number(x), gap, 0.0, 0.0, 1e-9});
  }
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

ExperimentReport run_exit_experiment(const BranchingMechanism& mech, double x0, double a, const RunSettings& s) {
  require_n(s);
  if (!mech.get_if<StableMinusDrift>()) throw ContractError("exit: requires the stable-minus-drift family");
  if (!(x0 > a && a > 0)) throw DomainError("exit: requires x0 > a > 0");
  Stopwatch sw;
  ExperimentReport r;
  r.name = "exit";
  r.seed = s.seed;
  r.n_samples = s.n;
  r.add_param("mechanism", mech.describe());
  r.add_param("x0", x0);
  r.add_param("a", a);
  r.add_param("escape_multiplier", s.sim.escape_multiplier);
  const double p = psi_largest_zero(mech);
  const auto hit = parallel_map<double>(s.n, s.workers, [&](std::size_t i) {
    RngStream rng(s.seed, i);
    return first_passage_down(mech, x0, a, 1e12, rng, s.sim).has_value() ? 1.0 : 0.0;
  });
  const double phat = std::accumulate(hit.begin(), hit.end(), 0.0) / static_cast<double>(s.n);
  const double se = std::sqrt(std::max(phat * (1.0 - phat), 1.0 / s.n) / s.n);
  r.estimates.push_back({"p_hat", phat, se, std::exp(-p * (x0 - a)), 3.0 * se});
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

std::vector<ClassificationRow> default_classification_rows() {
  using K = RegimeClass::Kind;
  return {
      {"stable_alpha=0.7_beta=0.5", Model(StableSubordinator{1.0, 0.7}, RateFunction(1.0, 0.5), 1.0), {K::NonExplosive, false}},
      {"stable_alpha=0.5_beta=1.5", Model(StableSubordinator{1.0, 0.5}, RateFunction(1.0, 1.5), 1.0), {K::Explosive, true}},
      {"stable_alpha=0.5_beta=1", Model(StableSubordinator{1.0, 0.5}, RateFunction(1.0, 1.0), 1.0), {K::Explosive, true}},
      {"log_tail_r=2_beta=1", Model(LogTailSubordinator{2.0}, RateFunction(1.0, 1.0), 1.0), {K::Explosive, true}},
      {"log_critical_gamma=2_beta=1", Model(LogCriticalSubordinator{2.0}, RateFunction(1.0, 1.0), 1.0), {K::Critical, true}},
      {"s_log_1/s_beta=1", Model(LogCriticalSubordinator{0.0}, RateFunction(1.0, 1.0), 1.0), {K::Critical, false}},
  };
}

ExperimentReport run_classification_suite(const std::vector<ClassificationRow>& rows, std::uint64_t seed) {
  Stopwatch sw;
  ExperimentReport r;
  r.name = "classification";
  r.seed = seed;
  r.n_samples = rows.size();
  for (const auto& row : rows) {
    const RegimeClass got = classify_regime(row.model);
    r.checks.push_back({row.label, got.describe(), row.expected.describe(), got == row.expected});
  }
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

ExperimentReport run_weibull_mgf_check() {
  Stopwatch sw;
  ExperimentReport r;
  r.name = "weibull_mgf";
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  for (double alpha : {0.25, 0.5, 0.75}) {
    for (double theta : {-0.5, 0.0, 0.5}) {
      // int_0^inf e^(theta t) dF(t) with t = x^(1-alpha), F = 1 - exp(-t^(1/(1-alpha)))
      const double oracle = numerics::integrate_to_infinity(
                                [&](double x) { return std::exp(theta * std::pow(x, 1.0 - alpha) - x); }, 0.0, opts)
                                .value;
      const double v = rho_mgf(alpha, 1.0, theta);
      r.estimates.push_back({"mgf_alpha=" + format_number(alpha) + "_theta=" + format_number(theta), v, 0.0, oracle,
                             1e-8 * std::abs(oracle)});
    }
  }
  r.n_samples = r.estimates.size();
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

ExperimentReport run_closed_form_checks() {
  Stopwatch sw;
  ExperimentReport r;
  r.name = "closed_forms";
  const Model drift(PureDriftSubordinator{1.0}, RateFunction(1.0, 2.0), 1.0);
  const ExplosionSimulator sim(drift);
  RngStream rng(0, 0);
  r.estimates.push_back({"pure_drift_t_inf", sim.sample(rng, 1e-6).t_inf_estimate, 0.0, 1.0, 1e-12});
  for (double t : {0.5, 0.1, 0.01}) {
    RngStream rr(0, 1);
    const auto v = sim.sample_pre_explosion({t}, rr, 1e-6).front();
    r.estimates.push_back({label_t("pure_drift_x_before_explosion", t), v.x_value, 0.0, 1.0 / t, 1e-12 / t});
  }
  const std::vector<std::pair<std::string, Model>> models = {
      {"stable_beta=1", Model(StableSubordinator{1.0, 0.5}, RateFunction(1.0, 1.0), 1.0)},
      {"stable_beta=1.5", Model(StableSubordinator{1.0, 0.5}, RateFunction(1.0, 1.5), 1.0)},
      {"log_tail", Model(LogTailSubordinator{2.0}, RateFunction(1.0, 1.0), 1.0)},
      {"log_critical", Model(LogCriticalSubordinator{2.0}, RateFunction(1.0, 1.0), 1.0)},
  };
  for (const auto& [name, m] : models) {
    const PhiFunction phi(m);
    for (double t : {1.0, 0.1, 0.01}) {
      const double back = phi(phi.inverse(t));
      r.estimates.push_back({label_t("phi_round_trip_" + name, t), back, 0.0, t, 1e-10 * t});
    }
  }
  const std::vector<double> hand = {0.25, 0.5, 0.75};
  r.estimates.push_back({"ks_hand_example", ks_statistic(hand, [](double x) { return x; }), 0.0, 0.25, 0.0});
  r.n_samples = r.estimates.size();
  r.finalize();
  r.runtime_seconds = sw.seconds();
  return r;
}

std::vector<ExperimentReport> run_suite(std::uint64_t seed, unsigned workers) {
  std::vector<ExperimentReport> out;
  RunSettings s;
  s.seed = seed;
  s.workers = workers;

  s.n = 20000;
  s.tail_tol = 1e-4;
  out.push_back(run_rho_experiment(0.5, 1.5, 1.0, s));
  out.push_back(run_weibull_mgf_check());

  s.n = 20000;
  out.push_back(run_overshoot_experiment(BranchingMechanism(StableSubordinator{1.0, 0.5}), 1e3, s));
  out.push_back(run_overshoot_experiment(BranchingMechanism(LogTailSubordinator{2.0}), 1e6, s));

  s.n = 10000;
  s.tail_tol = 1e-3;
  out.push_back(run_classical_cdf_experiment(0.5, 1.0, 1.0, {0.5, 1.0, 2.0, 4.0}, s));

  s.tail_tol = 1e-2;
  out.push_back(run_regime_experiment(Model(StableSubordinator{1.0, 0.5}, RateFunction(1.0, 1.0), 1.0),
                                      SpeedCase::Case1, {0.1, 0.05}, s));
  s.n = 5000;
  out.push_back(run_regime_experiment(Model(LogTailSubordinator{2.0}, RateFunction(1.0, 1.0), 1.0), SpeedCase::Case3,
                                      {0.1, 0.03, 0.01}, s));
  s.tail_tol = 5e-3;
  out.push_back(run_regime_experiment(Model(LogCriticalSubordinator{2.0}, RateFunction(1.0, 1.0), 1.0),
                                      SpeedCase::Case2, {0.1, 0.05, 0.02}, s));

  s.n = 10000;
  out.push_back(run_exit_experiment(BranchingMechanism(StableMinusDrift{1.0, 0.5, 1.0}), 2.0, 1.0, s));
  out.push_back(run_classification_suite(default_classification_rows(), seed));
  out.push_back(run_closed_form_checks());
  return out;
}

}  // namespace nlcsbp
