#include "nlcsbp/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "nlcsbp/errors.hpp"
#include "nlcsbp/quadrature.hpp"

namespace nlcsbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_if_positive(double v) { return v > 0 ? kInf : 0.0; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

double logaddexp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Smallest admissible value of log(e + z) on the decreasing branch.
double log_critical_corner(double gamma) { return std::max(gamma, 1.0); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

BranchingMechanism::BranchingMechanism(StableSubordinator f) : family_(f) {
  require(f.c0 > 0 && std::isfinite(f.c0), "stable: c0 must be > 0");
  require(f.alpha > 0 && f.alpha < 1, "stable: alpha must lie in (0, 1)");
}
BranchingMechanism::BranchingMechanism(PureDriftSubordinator f) : family_(f) {
  require(f.delta > 0 && std::isfinite(f.delta), "pure drift: delta must be > 0");
}
BranchingMechanism::BranchingMechanism(LogTailSubordinator f) : family_(f) {
  require(f.r > 0 && std::isfinite(f.r), "log tail: r must be > 0");
}
BranchingMechanism::BranchingMechanism(LogCriticalSubordinator f) : family_(f) {
  require(f.gamma >= 0 && std::isfinite(f.gamma), "log critical: gamma must be >= 0");
  require(f.eps_cut > 0 && f.eps_cut < 1, "log critical: eps_cut must lie in (0, 1)");
}
BranchingMechanism::BranchingMechanism(StableMinusDrift f) : family_(f) {
  require(f.c0 > 0 && std::isfinite(f.c0), "stable minus drift: c0 must be > 0");
  require(f.alpha > 0 && f.alpha < 1, "stable minus drift: alpha must lie in (0, 1)");
  require(f.c > 0 && std::isfinite(f.c), "stable minus drift: c must be > 0");
}

std::string BranchingMechanism::family_name() const {
  return std::visit(overloaded{[](const StableSubordinator&) { return std::string("stable"); },
                               [](const PureDriftSubordinator&) { return std::string("pure_drift"); },
                               [](const LogTailSubordinator&) { return std::string("log_tail"); },
                               [](const LogCriticalSubordinator&) { return std::string("log_critical"); },
                               [](const StableMinusDrift&) { return std::string("stable_minus_drift"); }},
                    family_);
}

std::string BranchingMechanism::describe() const {
  return std::visit(
      overloaded{[](const StableSubordinator& f) { return "stable(c0=" + fmt(f.c0) + ", alpha=" + fmt(f.alpha) + ")"; },
                 [](const PureDriftSubordinator& f) { return "pure_drift(delta=" + fmt(f.delta) + ")"; },
                 [](const LogTailSubordinator& f) { return "log_tail(r=" + fmt(f.r) + ")"; },
                 [](const LogCriticalSubordinator& f) { return "log_critical(gamma=" + fmt(f.gamma) + ")"; },
                 [](const StableMinusDrift& f) {
                   return "stable_minus_drift(c0=" + fmt(f.c0) + ", alpha=" + fmt(f.alpha) + ", c=" + fmt(f.c) + ")";
                 }},
      family_);
}

double BranchingMechanism::index() const {
  return std::visit(overloaded{[](const StableSubordinator& f) { return f.alpha; },
                               [](const PureDriftSubordinator&) { return 1.0; },
                               [](const LogTailSubordinator&) { return 0.0; },
                               [](const LogCriticalSubordinator&) { return 1.0; },
                               [](const StableMinusDrift& f) { return f.alpha; }},
                    family_);
}

bool BranchingMechanism::is_subordinator() const { return !std::holds_alternative<StableMinusDrift>(family_); }

bool BranchingMechanism::has_jumps() const { return !std::holds_alternative<PureDriftSubordinator>(family_); }

double BranchingMechanism::log_tail(double lz) const {
  return std::visit(overloaded{[&](const StableSubordinator& f) {
                                 return std::log(f.c0) - f.alpha * lz - std::lgamma(1.0 - f.alpha);
                               },
                               [&](const PureDriftSubordinator&) { return -kInf; },
                               [&](const LogTailSubordinator& f) { return -f.r * std::log(logaddexp(1.0, lz)); },
                               [&](const LogCriticalSubordinator& f) {
                                 const double L = std::max(logaddexp(1.0, lz), log_critical_corner(f.gamma));
                                 return (f.gamma > 0 ? f.gamma * std::log(L) : 0.0) - L;
                               },
                               [&](const StableMinusDrift& f) {
                                 return std::log(f.c0) - f.alpha * lz - std::lgamma(1.0 - f.alpha);
                               }},
                    family_);
}

double BranchingMechanism::tail(double z) const {
  if (!(z > 0)) throw DomainError("tail: z must be > 0");
  if (std::isinf(z)) return 0.0;
  return std::exp(log_tail(std::log(z)));
}

double BranchingMechanism::total_jump_rate() const {
  return std::visit(overloaded{[](const StableSubordinator&) { return kInf; },
                               [](const PureDriftSubordinator&) { return 0.0; },
                               [](const LogTailSubordinator&) { return 1.0; },
                               [](const LogCriticalSubordinator& f) {
                                 const double L = log_critical_corner(f.gamma);
                                 return std::exp((f.gamma > 0 ? f.gamma * std::log(L) : 0.0) - L);
                               },
                               [](const StableMinusDrift&) { return kInf; }},
                    family_);
}

// log of int_0^inf e^-w tail(w / s) dw, integrated in y = log w.
double BranchingMechanism::jump_log_laplace(double ls) const {
  const auto* lc = get_if<LogCriticalSubordinator>();
  // log critical: the tail is e^-L times a power of L, so ls is factored out exactly to keep precision at tiny s
  const double shift = lc ? ls : 0.0;
  auto ell = [&](double y) {
    if (!lc) return y - std::exp(y) + log_tail(y - ls);
    const double lz = y - ls;
    const double corner = log_critical_corner(lc->gamma);
    const double L = logaddexp(1.0, lz);
    const double pw = [&](double v) { return lc->gamma > 0 ? lc->gamma * std::log(v) : 0.0; }(std::max(L, corner));
    if (L <= corner) return lz - std::exp(y) + pw - corner;
    return -std::exp(y) + pw - std::log1p(std::exp(1.0 - lz));
  };
  const double y_lo = std::min(ls, 0.0) - 40.0;
  const double y_hi = std::log(750.0);
  std::vector<double> pts = {y_lo, ls - 5.0, ls, ls + 5.0, -5.0, 0.0, y_hi};
  if (lc) {
    const double zs = std::exp(log_critical_corner(lc->gamma)) - std::exp(1.0);
    if (zs > 0) pts.push_back(ls + std::log(zs));
  }
  std::erase_if(pts, [&](double p) { return !(p >= y_lo && p <= y_hi); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double m = -kInf;
  for (double p : pts) m = std::max(m, ell(p));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) m = std::max(m, ell(0.5 * (pts[i] + pts[i + 1])));
  auto h = [&](double y) { return std::exp(ell(y) - m); };
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 1e-16;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += numerics::integrate(h, pts[i], pts[i + 1], opts).value;
  return shift + m + std::log(total);
}

double BranchingMechanism::log_neg_psi(double ls) const {
  return std::visit(overloaded{[&](const StableSubordinator& f) { return std::log(f.c0) + f.alpha * ls; },
                               [&](const PureDriftSubordinator& f) { return std::log(f.delta) + ls; },
                               [&](const LogTailSubordinator&) { return jump_log_laplace(ls); },
                               [&](const LogCriticalSubordinator&) { return jump_log_laplace(ls); },
                               [&](const StableMinusDrift& f) {
                                 const double lp = std::log(f.c0 / f.c) / (1.0 - f.alpha);
                                 if (!(ls < lp)) throw DomainError("log_neg_psi: s must be below the largest zero");
                                 return std::log(f.c0) + f.alpha * ls +
                                        std::log1p(-(f.c / f.c0) * std::exp((1.0 - f.alpha) * ls));
                               }},
                    family_);
}

double BranchingMechanism::psi(double s) const {
  if (!(s >= 0) || std::isnan(s)) throw DomainError("psi: s must be >= 0");
  if (s == 0) return 0.0;
  if (const auto* f = get_if<StableMinusDrift>()) return f->c * s - f->c0 * std::pow(s, f->alpha);
  if (std::isinf(s)) return has_jumps() && total_jump_rate() < kInf ? -total_jump_rate() : -kInf;
  return -std::exp(log_neg_psi(std::log(s)));
}

double BranchingMechanism::largest_zero() const {
  if (is_subordinator()) return kInf;
  double lo = 1.0, hi = 1.0;
  while (psi(hi) <= 0) hi *= 2.0;
  while (psi(lo) >= 0) lo *= 0.5;
  return numerics::bisect_flip([&](double s) { return psi(s) > 0; }, lo, hi, 2000);
}

double psi_eval(const BranchingMechanism& mech, double s) { return mech.psi(s); }
double psi_largest_zero(const BranchingMechanism& mech) { return mech.largest_zero(); }

RateFunction::RateFunction(double kappa, double beta) : kappa_(kappa), beta_(beta) {
  require(kappa > 0 && std::isfinite(kappa), "rate: kappa must be > 0");
  require(beta > 0 && std::isfinite(beta), "rate: beta must be > 0");
}
double RateFunction::operator()(double y) const { return kappa_ * std::pow(y, beta_); }
double RateFunction::derivative(double y) const { return kappa_ * beta_ * std::pow(y, beta_ - 1.0); }
double RateFunction::log_value(double ly) const { return std::log(kappa_) + beta_ * ly; }

Model::Model(BranchingMechanism mech, RateFunction r, double x0_)
    : mechanism(std::move(mech)), rate(r), x0(x0_) {
  require(x0 > 0 && std::isfinite(x0), "model: x0 must be > 0");
}

std::string RegimeClass::describe() const {
  switch (kind) {
    case Kind::NonExplosive:
      return "non-explosive (case 1: alpha > beta)";
    case Kind::Explosive:
      return "explosive (beta > alpha)";
    case Kind::Critical:
      return explosive ? "critical alpha = beta, explosive" : "critical alpha = beta, non-explosive";
  }
  return "";
}

double phi_log_integrand(const Model& model, double u) {
  return std::exp(-model.rate.log_value(u) - model.mechanism.log_neg_psi(-u));
}

// Partial integrals over [u0, u0 + 2^k]. Converged when the last increment, or its geometric
// extrapolation, is below 1e-9 of the total; diverged when increments stop shrinking.
ConvergenceResult doubling_tail_integral(const std::function<double(double)>& g, double u0) {
  ConvergenceResult out;
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-9;
  opts.max_intervals = 400;
  double total = 0.0;
  double lo = u0;
  double width = 1.0;
  double quad_err = 0.0;
  double prev = -1.0;
  int flat_steps = 0;
  std::vector<double> ratios;
  for (int k = 0;; ++k) {
    const double hi = u0 + width;
    opts.abs_tol = 1e-10 * std::abs(total);
    const auto piece = numerics::integrate(g, lo, hi, opts);
    if (!std::isfinite(piece.value)) break;
    const double inc = std::abs(piece.value);
    total += piece.value;
    quad_err += piece.abs_error;
    out.upper_limit_used = hi;
    const double ratio = prev > 0 ? inc / prev : 1.0;
    ratios.push_back(ratio);
    const double tail = ratio < 0.99 ? inc * ratio / (1.0 - ratio) : inf_if_positive(inc);
    if (inc <= 1e-9 * std::abs(total) || (k >= 4 && tail <= 1e-9 * std::abs(total))) {
      out.converged = true;
      out.value = total;
      out.error_estimate = std::min(inc, tail) + quad_err;
      return out;
    }
    // pieces shrinking by a settled factor below 1: power-law decay in u, add the geometric tail
    if (k >= 8) {
      const auto [mn, mx] = std::minmax_element(ratios.end() - 4, ratios.end());
      if (*mx < 0.99 && *mx - *mn <= 0.01) {
        out.converged = true;
        out.value = total + tail;
        out.error_estimate = tail * (*mx - *mn) / (1.0 - *mx) + quad_err;
        return out;
      }
    }
    out.error_estimate = inc;
    flat_steps = ratio >= 0.99 ? flat_steps + 1 : 0;
    if (k >= 6 && flat_steps >= 3) break;
    if (width >= 1e12) break;
    prev = inc;
    lo = hi;
    width *= 2.0;
  }
  return out;
}

namespace {

double energy_start(const Model& model) {
  const double p = model.mechanism.largest_zero();
  return std::log(std::max(model.x0, std::isinf(p) ? 0.0 : 2.0 / p));
}

}  // namespace

ConvergenceResult explosion_energy(const Model& model) {
  return doubling_tail_integral([&](double u) { return phi_log_integrand(model, u); }, energy_start(model));
}

ConvergenceResult explosion_test_stieltjes(const Model& model) {
  const RateFunction& R = model.rate;
  auto h = [&](double u) {
    const double y = std::exp(u);
    const double d = R.derivative(y);
    if (!(d > 0)) throw ContractError("stieltjes test: rate must be increasing");
    return std::exp(std::log(d) - 2.0 * R.log_value(u) + u - model.mechanism.log_neg_psi(-u));
  };
  return doubling_tail_integral(h, energy_start(model));
}

RegimeClass classify_regime(const Model& model) {
  const double a = model.alpha();
  const double b = model.beta();
  if (a > b) return {RegimeClass::Kind::NonExplosive, false};
  if (b > a) return {RegimeClass::Kind::Explosive, true};
  return {RegimeClass::Kind::Critical, explosion_energy(model).converged};
}

PhiFunction::PhiFunction(const Model& model) : model_(model) {
  const double p = model.mechanism.largest_zero();
  lower_ = std::isinf(p) ? 0.0 : 1.0 / p;
  if (!explosion_energy(model).converged) throw DivergesError("phi: the explosion integral diverges");
}

double PhiFunction::operator()(double x) const {
  if (!(x > lower_)) throw DomainError("phi: x must exceed 1/p");
  if (std::isinf(x)) return 0.0;
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  const double u0 = std::log(x);
  const double scale = std::max(1.0, std::abs(u0));
  return numerics::integrate_to_infinity(
             [&](double w) { return scale * phi_log_integrand(model_, u0 + scale * w); }, 0.0, opts)
      .value;
}

double PhiFunction::inverse(double t) const {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("phi inverse: t must be > 0");
  auto at = [&](double v) { return (*this)(lower_ + std::exp(v)); };
  double lo = 0.0, hi = 0.0, step = 1.0;
  double f_lo, f_hi;
  if ((f_hi = at(0.0)) > t) {
    f_lo = f_hi;
    while (f_hi > t) {
      lo = hi;
      f_lo = f_hi;
      hi += step;
      step *= 2.0;
      if (hi > 710.0) throw DomainError("phi inverse: t too small");
      f_hi = at(hi);
    }
  } else {
    f_lo = f_hi;
    while (f_lo <= t) {
      hi = lo;
      f_hi = f_lo;
      lo -= step;
      step *= 2.0;
      if (lo < -745.0) throw DomainError("phi inverse: t must be below phi(1/p)");
      f_lo = at(lo);
    }
  }
  // at(lo) > t >= at(hi); Newton on log phi in v, falling back to bisection
  double v = hi;
  double f = f_hi;
  for (int i = 0; i < 300; ++i) {
    if (std::abs(f - t) <= 1e-12 * t) break;
    const double x = lower_ + std::exp(v);
    const double dlog = -phi_log_integrand(model_, std::log(x)) * std::exp(v) / x / f;
    double next = v - (std::log(f) - std::log(t)) / dlog;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    v = next;
    f = at(v);
    if (f > t) lo = v;
    else hi = v;
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(v))) break;
  }
  return lower_ + std::exp(v);
}

double phi_integral(const Model& model, double x) { return PhiFunction(model)(x); }
double phi_integral_inverse(const Model& model, double t) { return PhiFunction(model).inverse(t); }

}  // namespace nlcsbp
