// One line per acceptance criterion. Exit status is the number of failing criteria.
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nlcsbp/experiments.hpp"
#include "nlcsbp/limit_laws.hpp"
#include "nlcsbp/report.hpp"

using namespace nlcsbp;

namespace {

int failures = 0;

void verdict(int id, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

const ExperimentReport& find(const std::vector<ExperimentReport>& rs, const std::string& name, int nth = 0) {
  for (const auto& r : rs)
    if (r.name == name && nth-- == 0) return r;
  throw std::runtime_error("missing report " + name);
}

const EstimateEntry* estimate(const ExperimentReport& r, const std::string& label) {
  for (const auto& e : r.estimates)
    if (e.label == label) return &e;
  return nullptr;
}

const KsEntry* ks(const ExperimentReport& r, const std::string& label) {
  for (const auto& k : r.ks)
    if (k.label == label) return &k;
  return nullptr;
}

const CheckEntry* check(const ExperimentReport& r, const std::string& label) {
  for (const auto& c : r.checks)
    if (c.label == label) return &c;
  return nullptr;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

bool within_3se(const EstimateEntry* e, double target) { return e && std::abs(e->value - target) <= 3 * e->std_error; }

}  // namespace

int main() {
  const auto rs = run_suite(1, 1);

  {
    const auto& r = find(rs, "rho");
    const auto* m1 = estimate(r, "mean");
    const auto* m2 = estimate(r, "second_moment");
    const double t1 = 1.1283791671, t2 = rho_moment(0.5, 1.5, 1.0, 2);
    const bool ok = r.n_samples == 20000 && within_3se(m1, 1.1283791671) && within_3se(m2, t2) && r.runtime_seconds <= 120;
    verdict(1, "rho moments", ok,
            fmt("mean %.5f (se %.5f, target %.10g), second %.5f", m1->value, m1->std_error, t1, m2->value) +
                fmt(" (se %.5f, target %.6f), %.1fs", m2->std_error, t2, r.runtime_seconds));
  }
  {
    const auto& r = find(rs, "weibull_mgf");
    bool ok = r.estimates.size() == 9;
    double worst = 0;
    for (const auto& e : r.estimates) {
      const double rel = std::abs(e.value - e.target) / std::abs(e.target);
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-8;
    }
    verdict(2, "Weibull moment generating function", ok, fmt("worst relative error %.3g, %.3fs", worst, r.runtime_seconds));
  }
  {
    const auto& r = find(rs, "overshoot", 0);
    const auto* k = ks(r, "ks_ratio_vs_chi");
    const bool ok = k && k->n == 20000 && k->statistic <= 0.02 && r.runtime_seconds <= 60;
    verdict(3, "stable overshoot", ok, fmt("KS %.4f at level 1e3, %.1fs", k ? k->statistic : NAN, r.runtime_seconds));
  }
  {
    const auto& r = find(rs, "overshoot", 1);
    const auto* k = ks(r, "ks_psi_ratio_vs_uniform");
    const bool ok = k && k->n == 20000 && k->statistic <= 0.05;
    verdict(4, "slowly varying overshoot", ok, fmt("KS %.4f at level 1e6", k ? k->statistic : NAN));
  }
  {
    const auto& r = find(rs, "classical_cdf");
    const auto* k1 = ks(r, "ks_tinf_x0=1");
    const auto* k100 = ks(r, "ks_weibull_x0=100");
    const bool ok = k1 && k100 && k1->n == 10000 && k1->statistic <= 0.02 && k100->statistic <= 0.03 &&
                    r.runtime_seconds <= 300;
    verdict(5, "classical explosion time", ok,
            fmt("KS x0=1 %.4f, Weibull KS x0=100 %.4f, %.1fs", k1 ? k1->statistic : NAN, k100 ? k100->statistic : NAN,
                r.runtime_seconds));
  }
  {
    const auto& r = find(rs, "regime_case1");
    const auto* a = ks(r, "ks_vs_limit_t=0.1");
    const auto* b = ks(r, "ks_vs_limit_t=0.05");
    const bool ok = a && b && b->statistic <= 0.05 && b->statistic < a->statistic;
    verdict(6, "case 1 speed", ok, fmt("KS t=0.1 %.4f, t=0.05 %.4f", a ? a->statistic : NAN, b ? b->statistic : NAN));
  }
  {
    const auto& r = find(rs, "regime_case3");
    std::vector<double> d;
    for (const char* l : {"ks_psi_ratio_vs_uniform_t=0.1", "ks_psi_ratio_vs_uniform_t=0.03", "ks_psi_ratio_vs_uniform_t=0.01"})
      d.push_back(ks(r, l) ? ks(r, l)->statistic : NAN);
    const bool ok = d[2] <= 0.1 && d[0] > d[1] && d[1] > d[2];
    verdict(7, "case 3 speed (qualitative)", ok, fmt("KS along t: %.4f %.4f %.4f", d[0], d[1], d[2]));
  }
  {
    const auto& r = find(rs, "regime_case2");
    std::vector<double> iqr, med;
    for (const char* t : {"0.1", "0.05", "0.02"}) {
      const auto* i = estimate(r, std::string("iqr_ratio_t=") + t);
      const auto* m = estimate(r, std::string("median_ratio_t=") + t);
      iqr.push_back(i ? i->value : NAN);
      med.push_back(m ? m->value : NAN);
    }
    const bool ok = iqr[0] > iqr[1] && iqr[1] > iqr[2] && med[2] >= 0.5 && med[2] <= 2.0;
    verdict(8, "case 2 concentration (qualitative)", ok,
            fmt("IQR along t: %.4f %.4f %.4f", iqr[0], iqr[1], iqr[2]) + fmt(", median at t=0.02 %.4f", med[2]));
  }
  {
    const auto& r = find(rs, "exit");
    const auto* p = estimate(r, "p_hat");
    const bool ok = r.n_samples == 10000 && within_3se(p, std::exp(-1.0));
    verdict(9, "exit probability", ok, fmt("p_hat %.4f (se %.4f, target %.4f)", p->value, p->std_error, std::exp(-1.0)));
  }
  {
    const auto& r = find(rs, "classification");
    bool ok = r.checks.size() == 6;
    for (const auto& c : r.checks) ok = ok && c.observed == c.expected;
    verdict(10, "classification table", ok, std::to_string(r.checks.size()) + " rows");
  }
  {
    const auto& r = find(rs, "closed_forms");
    bool ok = true;
    std::string bad;
    for (const auto& e : r.estimates) {
      double tol = 1e-10 * std::abs(e.target);
      if (e.label.rfind("pure_drift", 0) == 0) tol = 1e-12 * std::abs(e.target);
      if (e.label == "ks_hand_example") tol = 0.0;
      if (!(std::abs(e.value - e.target) <= tol)) {
        ok = false;
        bad += " " + e.label;
      }
    }
    const auto* hand = estimate(r, "ks_hand_example");
    ok = ok && hand && hand->value == 0.25;
    verdict(11, "deterministic closed forms", ok, ok ? std::to_string(r.estimates.size()) + " checks" : "off:" + bad);
  }
  {
    const std::string ref = reports_to_csv(rs);
    std::string detail;
    bool ok = true;
    const std::pair<unsigned, const char*> runs[] = {{1, "rerun"}, {4, "4 workers"}, {8, "8 workers"}};
    for (const auto& [w, name] : runs) {
      const bool same = reports_to_csv(run_suite(1, w)) == ref;
      ok = ok && same;
      detail += std::string(detail.empty() ? "" : ", ") + name + (same ? " identical" : " differs");
    }
    verdict(12, "suite determinism", ok, detail);
  }
  return failures;
}
