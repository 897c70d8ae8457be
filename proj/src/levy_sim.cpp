#include "nlcsbp/levy_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Solve gamma log L - L = target for L >= corner.
double log_critical_solve(double gamma, double corner, double target) {
  if (gamma == 0.0) return std::max(corner, -target);
  auto f = [&](double L) { return L - gamma * std::log(L) + target; };
  double lo = corner;
  if (f(lo) >= 0) return lo;
  double hi = std::max(2.0 * corner, -target + gamma * std::log(std::max(-target, 1.0)) + 1.0);
  while (f(hi) <= 0) hi *= 2.0;
  double L = 0.5 * (lo + hi);
  for (int i = 0; i < 100; ++i) {
    const double v = f(L);
    if (v > 0) hi = L;
    else lo = L;
    const double d = 1.0 - gamma / L;
    double next = d > 0 ? L - v / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - L) <= 1e-15 * L;
    L = next;
    if (done || hi - lo <= 1e-15 * hi) break;
  }
  return L;
}

double exp_minus_e(double L) {
  if (L > 709.78) return kInf;
  return std::exp(L) - std::numbers::e;
}

}  // namespace

ParentProcess::ParentProcess(const BranchingMechanism& mech, const SimOptions& opts) : mech_(mech), opts_(opts) {
  if (!(opts.relative_jump_cut > 0 && opts.relative_jump_cut < 1)) throw DomainError("relative_jump_cut must lie in (0, 1)");
  if (!(opts.jump_cut_floor > 0)) throw DomainError("jump_cut_floor must be > 0");
  if (const auto* f = mech.get_if<StableSubordinator>()) {
    alpha_ = f->alpha;
    stable_scale_ = f->c0 / std::tgamma(1.0 - f->alpha);
  } else if (const auto* f = mech.get_if<StableMinusDrift>()) {
    alpha_ = f->alpha;
    stable_scale_ = f->c0 / std::tgamma(1.0 - f->alpha);
    linear_drift_ = -f->c;
  } else if (const auto* f = mech.get_if<PureDriftSubordinator>()) {
    linear_drift_ = f->delta;
  } else if (const auto* f = mech.get_if<LogCriticalSubordinator>()) {
    lc_corner_ = std::max(f->gamma, 1.0);
    lc_log_plateau_ = (f->gamma > 0 ? f->gamma * std::log(lc_corner_) : 0.0) - lc_corner_;
    lc_corner_z_ = std::exp(lc_corner_) - std::numbers::e;
  }
}

double ParentProcess::cutoff(double level) const {
  const double scale = std::max(std::abs(level), opts_.jump_cut_floor);
  if (stable_scale_ > 0) return opts_.relative_jump_cut * scale;
  if (const auto* f = mech_.get_if<LogCriticalSubordinator>()) {
    const double h = f->eps_cut * scale;
    return h > lc_corner_z_ ? h : 0.0;
  }
  return 0.0;
}

double ParentProcess::jump_rate(double h) const {
  if (stable_scale_ > 0) return stable_scale_ * std::pow(h, -alpha_);
  if (!mech_.has_jumps()) return 0.0;
  if (h == 0.0) return mech_.total_jump_rate();
  return mech_.tail(h);
}

double ParentProcess::small_jump_drift(double h) const {
  if (h == 0.0) return 0.0;
  if (stable_scale_ > 0) return stable_scale_ * alpha_ * std::pow(h, 1.0 - alpha_) / (1.0 - alpha_);
  if (const auto* f = mech_.get_if<LogCriticalSubordinator>()) {
    // int_0^h tail - h tail(h); below z* the tail is flat
    const double L = std::log(std::numbers::e + h);
    const double g1 = f->gamma + 1.0;
    const double integral = std::exp(lc_log_plateau_) * lc_corner_z_ + (std::pow(L, g1) - std::pow(lc_corner_, g1)) / g1;
    return integral - h * mech_.tail(h);
  }
  return 0.0;
}

Segment ParentProcess::draw_segment(double level, RngStream& rng) const {
  const double h = cutoff(level);
  const double rate = jump_rate(h);
  const double slope = linear_drift_ + small_jump_drift(h);
  const double wait = rate > 0 ? rng.exponential() / rate : kInf;
  return {slope, wait, h};
}

double ParentProcess::draw_jump(double h, RngStream& rng) const {
  const double u = rng.uniform();
  if (stable_scale_ > 0) return h * std::pow(u, -1.0 / alpha_);
  if (const auto* f = mech_.get_if<LogTailSubordinator>()) {
    const double base = h > 0 ? std::log(std::numbers::e + h) : 1.0;
    return exp_minus_e(base * std::pow(u, -1.0 / f->r));
  }
  if (const auto* f = mech_.get_if<LogCriticalSubordinator>()) {
    const double top = h > 0 ? mech_.log_tail(std::log(h)) : lc_log_plateau_;
    const double L = log_critical_solve(f->gamma, std::max(lc_corner_, h > 0 ? std::log(std::numbers::e + h) : 0.0),
                                        top + std::log(u));
    return std::max(exp_minus_e(L), h);
  }
  throw ContractError("draw_jump: mechanism has no jumps");
}

std::pair<PathState, PathEvent> next_event(const BranchingMechanism& mech, const PathState& state, double grid_dt,
                                           RngStream& rng, const SimOptions& opts) {
  if (!(grid_dt > 0) || !std::isfinite(grid_dt)) throw DomainError("next_event: grid_dt must be finite and > 0");
  const ParentProcess pp(mech, opts);
  const Segment seg = pp.draw_segment(state.value, rng);
  PathState out;
  out.segment_slope = seg.slope;
  if (seg.wait >= grid_dt) {
    out.time = state.time + grid_dt;
    out.value = state.value + seg.slope * grid_dt;
    return {out, PathEvent{EventKind::GridStep, out.time, out.value, out.value}};
  }
  out.time = state.time + seg.wait;
  const double pre = state.value + seg.slope * seg.wait;
  out.value = pre + pp.draw_jump(seg.cutoff, rng);
  return {out, PathEvent{EventKind::Jump, out.time, pre, out.value}};
}

double stable_positive_sample(double alpha, double c0, double dt, RngStream& rng) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("stable_positive_sample: alpha must lie in (0, 1)");
  if (!(c0 > 0) || !(dt > 0)) throw DomainError("stable_positive_sample: c0 and dt must be > 0");
  const double u = rng.uniform();
  const double e = rng.exponential();
  const double a = std::sin(alpha * kPi * u) / std::pow(std::sin(kPi * u), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * kPi * u) / e, (1.0 - alpha) / alpha);
  return std::pow(c0 * dt, 1.0 / alpha) * a * b;
}

double tail_inverse_jump_sample(const BranchingMechanism& mech, double u) {
  if (!(u > 0 && u <= 1)) throw DomainError("tail_inverse_jump_sample: u must lie in (0, 1]");
  if (const auto* f = mech.get_if<LogTailSubordinator>()) return exp_minus_e(std::pow(u, -1.0 / f->r));
  if (const auto* f = mech.get_if<LogCriticalSubordinator>()) {
    const double corner = std::max(f->gamma, 1.0);
    const double top = (f->gamma > 0 ? f->gamma * std::log(corner) : 0.0) - corner;
    return exp_minus_e(log_critical_solve(f->gamma, corner, top + std::log(u)));
  }
  throw DomainError("tail_inverse_jump_sample: requires a finite-activity jump family");
}

PassageSample simulate_until_level(const BranchingMechanism& mech, double x0, double b, RngStream& rng,
                                   const SimOptions& opts) {
  if (!std::isfinite(x0) || !std::isfinite(b)) throw DomainError("simulate_until_level: x0 and b must be finite");
  if (x0 >= b) return {0.0, x0, x0, 0};
  const ParentProcess pp(mech, opts);
  double t = 0.0, v = x0;
  for (std::uint64_t n = 1; n <= opts.max_events; ++n) {
    const Segment seg = pp.draw_segment(v, rng);
    if (seg.slope > 0 && v + seg.slope * seg.wait >= b) return {t + (b - v) / seg.slope, b, b, n};
    if (std::isinf(seg.wait)) throw HorizonError("simulate_until_level: the path never reaches the level");
    t += seg.wait;
    const double pre = v + seg.slope * seg.wait;
    v = pre + pp.draw_jump(seg.cutoff, rng);
    if (v > b) return {t, pre, v, n};
  }
  throw BudgetError("simulate_until_level: event budget exhausted");
}

std::optional<double> first_passage_down(const BranchingMechanism& mech, double x0, double a, double horizon,
                                         RngStream& rng, const SimOptions& opts) {
  if (!(x0 >= a)) throw DomainError("first_passage_down: requires x0 >= a");
  if (mech.is_subordinator()) return std::nullopt;
  const double escape = a + opts.escape_multiplier / mech.largest_zero();
  const ParentProcess pp(mech, opts);
  double t = 0.0, v = x0;
  for (std::uint64_t n = 0; n < opts.max_events; ++n) {
    if (v > escape) return std::nullopt;
    const Segment seg = pp.draw_segment(v, rng);
    if (seg.slope < 0 && v + seg.slope * seg.wait <= a) {
      const double hit = t + (a - v) / seg.slope;
      if (hit > horizon) throw UndecidedError("first_passage_down: horizon reached", {horizon, v, seg.slope});
      return hit;
    }
    t += seg.wait;
    if (t > horizon) throw UndecidedError("first_passage_down: horizon reached", {t, v, seg.slope});
    v += seg.slope * seg.wait + pp.draw_jump(seg.cutoff, rng);
  }
  throw BudgetError("first_passage_down: event budget exhausted");
}

std::vector<PathEvent> simulate_path(const BranchingMechanism& mech, double x0, double horizon, double grid_dt,
                                     RngStream& rng, const SimOptions& opts) {
  std::vector<PathEvent> out;
  PathState s{0.0, x0, 0.0};
  while (s.time < horizon) {
    if (out.size() >= opts.max_events) throw BudgetError("simulate_path: event budget exhausted");
    auto [next, ev] = next_event(mech, s, grid_dt, rng, opts);
    out.push_back(ev);
    s = next;
  }
  return out;
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) throw IoError("path dump: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_path_dump(std::ostream& os, const std::vector<PathEvent>& events) {
  put_le<std::uint64_t>(os, events.size());
  for (const auto& e : events) {
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(e.kind));
    put_le<double>(os, e.t_event);
    put_le<double>(os, e.pre_value);
    put_le<double>(os, e.post_value);
  }
  if (!os) throw IoError("path dump: write failed");
}

std::vector<PathEvent> read_path_dump(std::istream& is) {
  const auto n = get_le<std::uint64_t>(is);
  std::vector<PathEvent> out;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto k = get_le<std::uint8_t>(is);
    if (k > 2) throw IoError("path dump: bad event kind");
    PathEvent e{static_cast<EventKind>(k), 0, 0, 0};
    e.t_event = get_le<double>(is);
    e.pre_value = get_le<double>(is);
    e.post_value = get_le<double>(is);
    out.push_back(e);
  }
  return out;
}

}  // namespace nlcsbp
