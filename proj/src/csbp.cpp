#include "nlcsbp/csbp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlcsbp/errors.hpp"
#include "nlcsbp/limit_laws.hpp"
#include "nlcsbp/quadrature.hpp"

namespace nlcsbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_segment(double level0, double slope, double dt) {
  if (!(level0 > 0)) throw DomainError("eta: level must be > 0");
  if (!(dt >= 0)) throw DomainError("eta: dt must be >= 0");
  if (std::isnan(slope)) throw DomainError("eta: slope is NaN");
}

double log_max_level() { return std::log(std::numeric_limits<double>::max()); }

}  // namespace

double eta_increment(const RateFunction& rate, double level0, double slope, double dt) {
  check_segment(level0, slope, dt);
  if (std::isinf(level0) || dt == 0.0) return 0.0;
  const double k = rate.kappa();
  const double b = rate.beta();
  if (slope == 0.0) {
    if (std::isinf(dt)) throw DivergesError("eta: infinite flat segment");
    return dt / rate(level0);
  }
  if (std::isinf(dt)) {
    if (slope < 0) throw DomainError("eta: segment reaches zero");
    if (b <= 1.0) throw DivergesError("eta: infinite segment diverges for beta <= 1");
    return std::pow(level0, 1.0 - b) / (k * slope * (b - 1.0));
  }
  const double r = slope * dt / level0;
  if (!(r > -1.0)) throw DomainError("eta: segment reaches zero");
  if (b == 1.0) return std::log1p(r) / (k * slope);
  return std::pow(level0, 1.0 - b) * std::expm1((1.0 - b) * std::log1p(r)) / (k * slope * (1.0 - b));
}

double eta_segment_duration(const RateFunction& rate, double level0, double slope, double eta) {
  check_segment(level0, slope, eta);
  const double k = rate.kappa();
  const double b = rate.beta();
  if (slope == 0.0) return eta * rate(level0);
  double log1p_r;
  if (b == 1.0) {
    log1p_r = k * slope * eta;
  } else {
    const double arg = eta * k * slope * (1.0 - b) * std::pow(level0, b - 1.0);
    if (!(arg > -1.0)) return kInf;
    log1p_r = std::log1p(arg) / (1.0 - b);
  }
  return level0 * std::expm1(log1p_r) / slope;
}

PhiTable::PhiTable(const PhiFunction& phi, double log_level_lo, double step) : lo_(log_level_lo), step_(step) {
  const double hi = std::max(log_max_level() + step, lo_ + step);
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo_) / step_)) + 1;
  log_phi_.resize(n);
  const Model& m = phi.model();
  auto g = [&](double u) { return phi_log_integrand(m, u); };
  double acc = phi(std::exp(std::min(lo_ + (n - 1) * step_, log_max_level())));
  if (lo_ + (n - 1) * step_ > log_max_level()) {
    acc += numerics::integrate(g, log_max_level(), lo_ + (n - 1) * step_).value;
  }
  log_phi_[n - 1] = std::log(acc);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double a = lo_ + i * step_;
    auto panel = numerics::detail::kronrod15(g, a, a + step_);
    acc += panel.value;
    log_phi_[i] = std::log(acc);
  }
}

double PhiTable::operator()(double level) const {
  if (std::isinf(level)) return 0.0;
  if (!(level > 0)) return kInf;
  const double x = (std::log(level) - lo_) / step_;
  if (x < 0) return kInf;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= log_phi_.size()) return std::exp(log_phi_.back());
  const double w = x - i;
  return std::exp((1.0 - w) * log_phi_[i] + w * log_phi_[i + 1]);
}

namespace {

double table_start(const Model& m) {
  const double p = m.mechanism.largest_zero();
  return std::log(std::max(m.x0, std::isinf(p) ? 0.0 : 2.0 / p));
}

void require_explosive(const Model& m) {
  const RegimeClass rc = classify_regime(m);
  if (!rc.explosive) throw ContractError("explosion simulation requires an explosive regime, got: " + rc.describe());
}

const Model& checked(const Model& m) {
  require_explosive(m);
  return m;
}

}  // namespace

ExplosionSimulator::ExplosionSimulator(const Model& model, const SimOptions& opts)
    : model_(checked(model)),
      parent_(model.mechanism, opts),
      phi_(model),
      table_(phi_, table_start(model)),
      c1_(std::exp(std::lgamma(model.beta() - model.alpha() + 1.0) - std::lgamma(model.beta()))),
      escape_level_(model.mechanism.is_subordinator() ? 0.0
                                                      : opts.escape_multiplier / model.mechanism.largest_zero()) {}

double ExplosionSimulator::residual_bound(double level) const { return 4.0 * c1_ * table_(level); }

ExplosionSample ExplosionSimulator::run(RngStream& rng, double tail_tol, double horizon_floor,
                                        std::vector<Piece>* record) const {
  if (!(tail_tol > 0)) throw DomainError("tail_tol must be > 0");
  const RateFunction& R = model_.rate;
  const std::uint64_t budget = parent_.options().max_events;
  std::uint64_t events = 0;
  std::uint64_t restarts = 0;
  while (true) {
    double v = model_.x0;
    double eta = 0.0;
    bool escaped = v > escape_level_;
    bool restart = false;
    if (record) record->clear();
    while (true) {
      if (escaped) {
        const double bound = residual_bound(v);
        if (bound <= tail_tol * std::min(eta, horizon_floor)) return {eta, bound, events, v, restarts};
      }
      if (std::isinf(v)) return {eta, 0.0, events, v, restarts};
      if (++events > budget) throw BudgetError("explosion: event budget exhausted");
      const Segment seg = parent_.draw_segment(v, rng);
      if (std::isinf(seg.wait)) {
        const double d = eta_increment(R, v, seg.slope, kInf);
        if (record) record->push_back({v, seg.slope, eta, d});
        return {eta + d, 0.0, events, kInf, restarts};
      }
      if (seg.slope < 0 && v + seg.slope * seg.wait <= 0) {
        restart = true;
        break;
      }
      const double d = eta_increment(R, v, seg.slope, seg.wait);
      if (record) record->push_back({v, seg.slope, eta, d});
      eta += d;
      v += seg.slope * seg.wait + parent_.draw_jump(seg.cutoff, rng);
      if (!escaped && v > escape_level_) escaped = true;
    }
    if (restart) ++restarts;
  }
}

ExplosionSample ExplosionSimulator::sample(RngStream& rng, double tail_tol) const {
  return run(rng, tail_tol, kInf, nullptr);
}

std::vector<PreExplosionSample> ExplosionSimulator::sample_pre_explosion(const std::vector<double>& lookbacks,
                                                                         RngStream& rng, double tail_tol) const {
  std::vector<double> scales;
  for (double t : lookbacks) {
    if (!(t > 0)) throw DomainError("pre-explosion: lookbacks must be > 0");
    scales.push_back(phi_.inverse(t));
  }
  return sample_pre_explosion(lookbacks, scales, rng, tail_tol);
}

std::vector<PreExplosionSample> ExplosionSimulator::sample_pre_explosion(const std::vector<double>& lookbacks,
                                                                         const std::vector<double>& scales,
                                                                         RngStream& rng, double tail_tol) const {
  if (lookbacks.empty()) throw DomainError("pre-explosion: empty lookback grid");
  if (scales.size() != lookbacks.size()) throw DomainError("pre-explosion: one scale per lookback required");
  double t_min = kInf;
  for (double t : lookbacks) {
    if (!(t > 0)) throw DomainError("pre-explosion: lookbacks must be > 0");
    t_min = std::min(t_min, t);
  }
  std::vector<Piece> pieces;
  const ExplosionSample s = run(rng, tail_tol, t_min, &pieces);
  const double total = s.t_inf_estimate;
  std::vector<PreExplosionSample> out;
  out.reserve(lookbacks.size());
  for (std::size_t j = 0; j < lookbacks.size(); ++j) {
    const double t = lookbacks[j];
    const double target = total - t;
    double x = model_.x0;
    const bool boundary = !(target > 0);
    if (!boundary) {
      auto it = std::upper_bound(pieces.begin(), pieces.end(), target,
                                 [](double e, const Piece& p) { return e < p.eta_start; });
      const Piece& p = *(it - 1);
      const double into = std::min(target - p.eta_start, p.eta_len);
      x = p.level + p.slope * eta_segment_duration(model_.rate, p.level, p.slope, into);
    }
    out.push_back({t, x, x / scales[j], boundary});
  }
  return out;
}

ExplosionSample simulate_explosion(const Model& model, RngStream& rng, double tail_tol, const SimOptions& opts) {
  return ExplosionSimulator(model, opts).sample(rng, tail_tol);
}

PreExplosionSample pre_explosion_value(const Model& model, double t, RngStream& rng, double tail_tol,
                                       const SimOptions& opts) {
  return ExplosionSimulator(model, opts).sample_pre_explosion({t}, rng, tail_tol).front();
}

Case1LimitSampler::Case1LimitSampler(double alpha, double beta, double tail_tol)
    : alpha_(alpha),
      beta_(beta),
      tail_tol_(tail_tol),
      sim_(Model(StableSubordinator{1.0 / (beta - alpha), alpha}, RateFunction(1.0, beta), 1.0)) {}

double Case1LimitSampler::rho(RngStream& rng) const { return sim_.sample(rng, tail_tol_).t_inf_estimate; }

double Case1LimitSampler::operator()(RngStream& rng) const {
  const double r = rho(rng);
  return std::pow(r, 1.0 / (beta_ - alpha_)) / chi_sample(alpha_, rng);
}

namespace {

void require_subordinator(const BranchingMechanism& mech) {
  if (!mech.is_subordinator()) throw DomainError("classical CSBP quantities require a subordinator");
}

// Solve F(log u) = t for increasing F with F(start) = 0 or F -> 0 at -inf.
template <class F>
double solve_log(F&& f, double t, double start) {
  double lo = start, hi = start + 1.0, step = 1.0;
  while (f(hi) < t) {
    lo = hi;
    hi += step;
    step *= 2.0;
    if (hi > 745.0) throw DomainError("cumulant: no finite solution");
  }
  step = 1.0;
  while (f(lo) > t) {
    hi = lo;
    lo -= step;
    step *= 2.0;
    if (lo < -745.0) return 0.0;
  }
  return std::exp(numerics::bisect_flip([&](double x) { return f(x) >= t; }, lo, hi, 200));
}

}  // namespace

double cumulant_u_numeric(const BranchingMechanism& mech, double lambda, double t) {
  require_subordinator(mech);
  if (!(lambda > 0) || !(t >= 0)) throw DomainError("cumulant_u: requires lambda > 0 and t >= 0");
  if (t == 0) return lambda;
  const double l0 = std::log(lambda);
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  auto f = [&](double lu) {
    return numerics::integrate([&](double w) { return std::exp(w - mech.log_neg_psi(w)); }, l0, lu, opts).value;
  };
  return solve_log(f, t, l0);
}

double cumulant_u(const BranchingMechanism& mech, double lambda, double t) {
  require_subordinator(mech);
  if (!(lambda > 0) || !(t >= 0)) throw DomainError("cumulant_u: requires lambda > 0 and t >= 0");
  if (const auto* f = mech.get_if<StableSubordinator>())
    return std::pow(std::pow(lambda, 1.0 - f->alpha) + f->c0 * (1.0 - f->alpha) * t, 1.0 / (1.0 - f->alpha));
  if (const auto* f = mech.get_if<PureDriftSubordinator>()) return lambda * std::exp(f->delta * t);
  return cumulant_u_numeric(mech, lambda, t);
}

ConvergenceResult dynkin_test(const BranchingMechanism& mech) {
  // int_0 du / |psi(u)| with u = e^-w
  const double p = mech.largest_zero();
  const double w0 = -std::log(std::min(1.0, 0.5 * p));
  return doubling_tail_integral([&](double w) { return std::exp(-w - mech.log_neg_psi(-w)); }, w0);
}

double cumulant_u0_numeric(const BranchingMechanism& mech, double t) {
  require_subordinator(mech);
  if (!(t >= 0)) throw DomainError("cumulant_u0: t must be >= 0");
  if (!dynkin_test(mech).converged) throw NonExplosiveError("cumulant_u0: the Dynkin integral diverges");
  if (t == 0) return 0.0;
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  // G(log u) = int_0^u dv / (-psi(v))
  auto G = [&](double lu) {
    return numerics::integrate_to_infinity([&](double w) { return std::exp(-w - mech.log_neg_psi(-w)); }, -lu, opts)
        .value;
  };
  return solve_log(G, t, 0.0);
}

double cumulant_u0(const BranchingMechanism& mech, double t) {
  require_subordinator(mech);
  if (!(t >= 0)) throw DomainError("cumulant_u0: t must be >= 0");
  if (const auto* f = mech.get_if<StableSubordinator>())
    return std::pow(f->c0 * (1.0 - f->alpha) * t, 1.0 / (1.0 - f->alpha));
  if (mech.get_if<PureDriftSubordinator>()) throw NonExplosiveError("cumulant_u0: the Dynkin integral diverges");
  return cumulant_u0_numeric(mech, t);
}

double classical_explosion_cdf(const BranchingMechanism& mech, double x, double t) {
  if (!(x > 0)) throw DomainError("classical_explosion_cdf: x must be > 0");
  return -std::expm1(-x * cumulant_u0(mech, t));
}

double expected_eta_via_potential(double alpha, double beta, double c0) {
  if (!(alpha > 0 && alpha < 1) || !(beta > alpha) || !(c0 > 0))
    throw DomainError("expected_eta_via_potential: requires 0 < alpha < 1, beta > alpha, c0 > 0");
  return std::exp(std::lgamma(beta - alpha) - std::lgamma(beta)) / c0;
}

}  // namespace nlcsbp
