#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nlcsbp::numerics {

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

struct Panel {
  double a, b, value, error;
};

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// 15-point Kronrod rule with the embedded 7-point Gauss rule; error estimate as in QUADPACK.
template <class F>
Panel kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  const double ah = std::abs(h);
  resk *= h;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg * h));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, resk, err};
}

}  // namespace detail

// Adaptive global-subdivision Gauss-Kronrod on a finite interval.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  auto cmp = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
  std::vector<detail::Panel> heap;
  heap.reserve(64);
  heap.push_back(detail::kronrod15(f, a, b));
  double total = heap[0].value;
  double err = heap[0].error;
  while (true) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (err <= target) {
      out.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= opts.max_intervals) break;
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    const detail::Panel left = detail::kronrod15(f, worst.a, mid);
    const detail::Panel right = detail::kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), cmp);
  }
  out.value = 0.0;
  out.abs_error = 0.0;
  for (const auto& p : heap) {
    out.value += p.value;
    out.abs_error += p.error;
  }
  out.intervals = static_cast<int>(heap.size());
  if (!out.converged) out.converged = out.abs_error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
  return out;
}

// Integral over [a, inf) via x = a + t / (1 - t).
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, const QuadratureOptions& opts = {}) {
  auto g = [&](double t) {
    const double s = 1.0 - t;
    const double v = f(a + t / s);
    return v == 0.0 ? 0.0 : v / (s * s);
  };
  return integrate(g, 0.0, 1.0, opts);
}

// Integral over (-inf, b] via x = b - (1 - t) / t.
template <class F>
QuadratureResult integrate_from_minus_infinity(F&& f, double b, const QuadratureOptions& opts = {}) {
  auto g = [&](double t) {
    const double v = f(b - (1.0 - t) / t);
    return v == 0.0 ? 0.0 : v / (t * t);
  };
  return integrate(g, 0.0, 1.0, opts);
}

// Bisection on a monotone predicate: returns a point where pred flips, lo has pred false, hi true.
template <class Pred>
double bisect_flip(Pred&& pred, double lo, double hi, int max_iter = 200) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nlcsbp::numerics
