#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nlcsbp/levy_sim.hpp"
#include "nlcsbp/mechanisms.hpp"

namespace nlcsbp {

enum class Verdict { Pass, Fail, QualitativePass, QualitativeFail };
std::string to_string(Verdict v);
bool is_passing(Verdict v);

struct EstimateEntry {
  std::string label;
  double value;
  double std_error;
  double target;
  // |value - target| <= tolerance; infinite for informational rows
  double tolerance;
  bool passed() const;
};

struct KsEntry {
  std::string label;
  double statistic;
  // infinite for informational rows
  double threshold;
  std::uint64_t n;
  bool passed() const { return statistic <= threshold; }
};

struct CheckEntry {
  std::string label;
  std::string observed;
  std::string expected;
  bool passed;
};

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t n_samples = 0;
  std::vector<EstimateEntry> estimates;
  std::vector<KsEntry> ks;
  std::vector<CheckEntry> checks;
  bool qualitative = false;
  Verdict verdict = Verdict::Fail;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;

  void add_param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
  void add_param(const std::string& key, double value);
  // Sets the verdict from the entries.
  void finalize();
};

struct RunSettings {
  std::uint64_t n = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double tail_tol = 1e-3;
  SimOptions sim{};
  std::optional<double> ks_threshold;
};

// sup_i max(i/n - F(x_i), F(x_i) - (i-1)/n) over sorted samples.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);
double ks_two_sample(std::span<const double> a_sorted, std::span<const double> b_sorted);
// Type-7 quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

// f(i) for i in [0, n) over a pool of threads; results are indexed, so output does not depend on workers.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned workers, F&& f) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t err_index = n;
  std::exception_ptr err;
  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
        next.store(n);
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (w == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

enum class SpeedCase { Case1 = 1, Case2 = 2, Case3 = 3 };

struct RegimeThresholds {
  double case1_ks = 0.05;
  double case3_ks = 0.1;
  double case2_median_lo = 0.5;
  double case2_median_hi = 2.0;
};

struct ClassificationRow {
  std::string label;
  Model model;
  RegimeClass expected;
};

ExperimentReport run_overshoot_experiment(const BranchingMechanism& mech, double level, const RunSettings& s);
ExperimentReport run_rho_experiment(double alpha, double beta, double c0, const RunSettings& s);
ExperimentReport run_regime_experiment(const Model& model, SpeedCase which, std::vector<double> t_grid,
                                       const RunSettings& s, const RegimeThresholds& th = {});
ExperimentReport run_classical_cdf_experiment(double alpha, double c0, double x0, const std::vector<double>& t_grid,
                                              const RunSettings& s);
ExperimentReport run_exit_experiment(const BranchingMechanism& mech, double x0, double a, const RunSettings& s);
std::vector<ClassificationRow> default_classification_rows();
ExperimentReport run_classification_suite(const std::vector<ClassificationRow>& rows, std::uint64_t seed);
ExperimentReport run_weibull_mgf_check();
ExperimentReport run_closed_form_checks();

// The acceptance battery with its fixed parameters.
std::vector<ExperimentReport> run_suite(std::uint64_t seed, unsigned workers);

}  // namespace nlcsbp
