#include "nlcsbp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

namespace pt = boost::property_tree;

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> cat = {
      {"rho", "moments of the limiting explosion time, stable subordinator with R(y)=y^beta"},
      {"weibull_mgf", "moment generating function of the Weibull special case"},
      {"overshoot", "overshoot ratio over a high level, chi limit law or slowly varying uniform law"},
      {"classical_cdf", "explosion time distribution of the classical CSBP and its Weibull renormalisation"},
      {"regime", "speed of explosion, cases 1 to 3 (set run.case)"},
      {"exit", "probability of ever passing below a, stable minus drift parent"},
      {"classification", "explosive / non-explosive / critical table"},
      {"closed_forms", "pure drift explosion, phi round trips and KS hand example"},
  };
  return cat;
}

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"", {"experiment"}},
    {"mechanism", {"family", "c0", "alpha", "delta", "r", "gamma", "c", "eps_cut"}},
    {"rate", {"kappa", "beta"}},
    {"run", {"n", "seed", "workers", "tail_tol", "level", "x0", "a", "t_grid", "case", "relative_jump_cut",
             "ks_threshold"}},
    {"output", {"csv", "json"}},
};

class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<std::string>& errors) : tree_(tree), errors_(errors) {}

  bool has(const std::string& path) const { return tree_.get_optional<std::string>(path).has_value(); }

  std::string str(const std::string& path, const std::string& def) const {
    return tree_.get<std::string>(path, def);
  }

  double num(const std::string& path, double def) {
    const auto raw = tree_.get_optional<std::string>(path);
    if (!raw) return def;
    const std::string s = *raw;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || std::isnan(v)) {
      errors_.push_back(path + ": expected a number, got '" + s + "'");
      return def;
    }
    return v;
  }

  std::uint64_t count(const std::string& path, std::uint64_t def) {
    const auto raw = tree_.get_optional<std::string>(path);
    if (!raw) return def;
    const std::string s = *raw;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size()) {
      errors_.push_back(path + ": expected a non-negative integer, got '" + s + "'");
      return def;
    }
    return v;
  }

  std::vector<double> list(const std::string& path) {
    std::vector<double> out;
    const auto raw = tree_.get_optional<std::string>(path);
    if (!raw) return out;
    std::string s = *raw;
    for (char& ch : s)
      if (ch == ',') ch = ' ';
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) {
        errors_.push_back(path + ": expected a list of numbers, got '" + *raw + "'");
        return {};
      }
      out.push_back(v);
    }
    return out;
  }

  void require(bool ok, const std::string& key, const std::string& constraint) {
    if (!ok) errors_.push_back(key + ": must satisfy " + constraint);
  }

 private:
  const pt::ptree& tree_;
  std::vector<std::string>& errors_;
};

void check_keys(const pt::ptree& tree, std::vector<std::string>& errors) {
  for (const auto& [key, child] : tree) {
    if (child.empty()) {
      if (!kSchema.at("").count(key)) errors.push_back(key + ": unknown key");
      continue;
    }
    const auto it = kSchema.find(key);
    if (it == kSchema.end() || key.empty()) {
      errors.push_back("[" + key + "]: unknown section");
      continue;
    }
    for (const auto& [sub, leaf] : child) {
      if (!it->second.count(sub)) errors.push_back(key + "." + sub + ": unknown key");
      else if (!leaf.empty()) errors.push_back(key + "." + sub + ": nested keys are not allowed");
    }
  }
}

std::optional<BranchingMechanism> read_mechanism(Reader& rd, std::vector<std::string>& errors) {
  if (!rd.has("mechanism.family")) return std::nullopt;
  const std::string fam = rd.str("mechanism.family", "");
  const double c0 = rd.num("mechanism.c0", 1.0);
  const double alpha = rd.num("mechanism.alpha", 0.5);
  try {
    if (fam == "stable") return BranchingMechanism(StableSubordinator{c0, alpha});
    if (fam == "pure_drift") return BranchingMechanism(PureDriftSubordinator{rd.num("mechanism.delta", 1.0)});
    if (fam == "log_tail") return BranchingMechanism(LogTailSubordinator{rd.num("mechanism.r", 2.0)});
    if (fam == "log_critical") {
      LogCriticalSubordinator lc{rd.num("mechanism.gamma", 2.0)};
      lc.eps_cut = rd.num("mechanism.eps_cut", lc.eps_cut);
      return BranchingMechanism(lc);
    }
    if (fam == "stable_minus_drift") return BranchingMechanism(StableMinusDrift{c0, alpha, rd.num("mechanism.c", 1.0)});
    errors.push_back("mechanism.family: must be one of stable, pure_drift, log_tail, log_critical, stable_minus_drift");
  } catch (const DomainError& e) {
    errors.push_back("mechanism." + fam + ": " + e.what());
  }
  return std::nullopt;
}

// filled in only where the document is silent
const std::map<std::string, std::vector<std::pair<std::string, std::string>>> kDefaults = {
    {"rho", {{"mechanism.family", "stable"}, {"rate.beta", "1.5"}, {"run.n", "20000"}, {"run.tail_tol", "1e-4"}}},
    {"overshoot", {{"mechanism.family", "stable"}, {"run.level", "1000"}, {"run.n", "20000"}}},
    {"classical_cdf", {{"mechanism.family", "stable"}, {"run.t_grid", "0.5, 1, 2, 4"}}},
    {"regime", {{"mechanism.family", "stable"}, {"run.t_grid", "0.1, 0.05"}, {"run.tail_tol", "1e-2"}}},
    {"exit", {{"mechanism.family", "stable_minus_drift"}, {"run.x0", "2"}, {"run.a", "1"}}},
};

}  // namespace

ConfigResult validate_config(const std::string& text,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
  ConfigResult res;
  auto& errors = res.errors;
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    errors.push_back("config: malformed document: " + e.message() + " (line " + std::to_string(e.line()) + ")");
    return res;
  }
  for (const auto& [k, v] : overrides) tree.put(k, v);
  check_keys(tree, errors);

  const std::string experiment = tree.get<std::string>("experiment", "");
  if (const auto it = kDefaults.find(experiment); it != kDefaults.end())
    for (const auto& [k, v] : it->second)
      if (!tree.get_optional<std::string>(k)) tree.put(k, v);

  Reader rd(tree, errors);
  RunConfig cfg;
  cfg.experiment = experiment;
  bool known = false;
  for (const auto& e : experiment_catalog()) known = known || e.name == cfg.experiment;
  if (!known) {
    std::string names;
    for (const auto& e : experiment_catalog()) names += (names.empty() ? "" : ", ") + e.name;
    errors.push_back("experiment: unknown experiment '" + cfg.experiment + "' (one of " + names + ")");
    return res;
  }

  cfg.mechanism = read_mechanism(rd, errors);
  cfg.kappa = rd.num("rate.kappa", 1.0);
  cfg.beta = rd.num("rate.beta", 1.0);
  rd.require(cfg.kappa > 0 && std::isfinite(cfg.kappa), "rate.kappa", "0 < kappa < inf");
  rd.require(cfg.beta > 0 && std::isfinite(cfg.beta), "rate.beta", "0 < beta < inf");

  auto& run = cfg.run;
  run.n = rd.count("run.n", run.n);
  run.seed = rd.count("run.seed", run.seed);
  run.workers = static_cast<unsigned>(rd.count("run.workers", run.workers));
  run.tail_tol = rd.num("run.tail_tol", run.tail_tol);
  run.sim.relative_jump_cut = rd.num("run.relative_jump_cut", run.sim.relative_jump_cut);
  if (rd.has("run.ks_threshold")) run.ks_threshold = rd.num("run.ks_threshold", 0.0);
  cfg.level = rd.num("run.level", cfg.level);
  cfg.x0 = rd.num("run.x0", cfg.x0);
  cfg.a = rd.num("run.a", cfg.a);
  cfg.t_grid = rd.list("run.t_grid");
  const auto case_no = rd.count("run.case", 1);
  rd.require(case_no >= 1 && case_no <= 3, "run.case", "case in {1, 2, 3}");
  cfg.speed_case = static_cast<SpeedCase>(case_no);
  rd.require(run.n >= 1, "run.n", "n >= 1");
  rd.require(run.workers >= 1, "run.workers", "workers >= 1");
  rd.require(run.tail_tol > 0 && run.tail_tol < 1, "run.tail_tol", "0 < tail_tol < 1");
  rd.require(run.sim.relative_jump_cut > 0 && run.sim.relative_jump_cut < 1, "run.relative_jump_cut",
             "0 < relative_jump_cut < 1");
  if (run.ks_threshold) rd.require(*run.ks_threshold > 0 && *run.ks_threshold <= 1, "run.ks_threshold", "0 < ks_threshold <= 1");
  cfg.csv_path = rd.str("output.csv", "");
  cfg.json_path = rd.str("output.json", "");

  const std::string& ex = cfg.experiment;
  const bool needs_mech = ex == "rho" || ex == "overshoot" || ex == "classical_cdf" || ex == "regime" || ex == "exit";
  if (needs_mech && !cfg.mechanism) {
    if (!rd.has("mechanism.family")) errors.push_back("mechanism.family: required for experiment " + ex);
    res.errors = errors;
    return res;
  }
  const auto fam = cfg.mechanism ? cfg.mechanism->family_name() : std::string{};
  const double alpha = cfg.mechanism ? cfg.mechanism->index() : 0.0;
  if (ex == "rho") {
    rd.require(cfg.mechanism->get_if<StableSubordinator>() != nullptr, "mechanism.family", "family = stable");
    rd.require(alpha < 1, "mechanism.alpha", "0 < alpha < 1");
    rd.require(cfg.beta > alpha, "rate.beta", "beta > alpha");
  } else if (ex == "overshoot") {
    rd.require(cfg.level > 0 && std::isfinite(cfg.level), "run.level", "0 < level < inf");
  } else if (ex == "classical_cdf") {
    rd.require(cfg.mechanism->get_if<StableSubordinator>() != nullptr, "mechanism.family", "family = stable");
    rd.require(alpha < 1, "mechanism.alpha", "0 < alpha < 1");
    rd.require(cfg.beta == 1.0, "rate.beta", "beta = 1");
    rd.require(cfg.x0 > 0 && std::isfinite(cfg.x0), "run.x0", "0 < x0 < inf");
    rd.require(!cfg.t_grid.empty(), "run.t_grid", "at least one time");
    for (double t : cfg.t_grid) rd.require(t > 0, "run.t_grid", "every t > 0");
  } else if (ex == "regime") {
    rd.require(cfg.x0 > 0 && std::isfinite(cfg.x0), "run.x0", "0 < x0 < inf");
    rd.require(!cfg.t_grid.empty(), "run.t_grid", "at least one time");
    for (double t : cfg.t_grid) rd.require(t > 0, "run.t_grid", "every t > 0");
    if (case_no == 1) rd.require(cfg.beta > alpha && alpha > 0, "run.case", "case 1 needs beta > alpha > 0");
    if (case_no == 2) rd.require(cfg.beta == alpha, "run.case", "case 2 needs beta = alpha");
    if (case_no == 3) rd.require(alpha == 0.0, "run.case", "case 3 needs alpha = 0");
    if (cfg.mechanism) {
      try {
        if (!classify_regime(Model(*cfg.mechanism, RateFunction(cfg.kappa, cfg.beta), cfg.x0)).explosive)
          errors.push_back("rate.beta: the model must be explosive");
      } catch (const std::exception& e) {
        errors.push_back("mechanism." + fam + ": " + e.what());
      }
    }
  } else if (ex == "exit") {
    rd.require(cfg.mechanism->get_if<StableMinusDrift>() != nullptr, "mechanism.family", "family = stable_minus_drift");
    rd.require(cfg.a > 0, "run.a", "a > 0");
    rd.require(cfg.x0 > cfg.a && std::isfinite(cfg.x0), "run.x0", "x0 > a");
  }
  if (errors.empty()) res.config = std::move(cfg);
  return res;
}

ExperimentReport run_config(const RunConfig& cfg) {
  const auto& ex = cfg.experiment;
  if (ex == "rho") {
    const auto* st = cfg.mechanism->get_if<StableSubordinator>();
    return run_rho_experiment(st->alpha, cfg.beta, st->c0, cfg.run);
  }
  if (ex == "weibull_mgf") return run_weibull_mgf_check();
  if (ex == "overshoot") return run_overshoot_experiment(*cfg.mechanism, cfg.level, cfg.run);
  if (ex == "classical_cdf") {
    const auto* st = cfg.mechanism->get_if<StableSubordinator>();
    return run_classical_cdf_experiment(st->alpha, st->c0, cfg.x0, cfg.t_grid, cfg.run);
  }
  if (ex == "regime")
    return run_regime_experiment(Model(*cfg.mechanism, RateFunction(cfg.kappa, cfg.beta), cfg.x0), cfg.speed_case,
                                 cfg.t_grid, cfg.run);
  if (ex == "exit") return run_exit_experiment(*cfg.mechanism, cfg.x0, cfg.a, cfg.run);
  if (ex == "classification") return run_classification_suite(default_classification_rows(), cfg.run.seed);
  if (ex == "closed_forms") return run_closed_form_checks();
  throw ConfigError("experiment: unknown experiment '" + ex + "'");
}

}  // namespace nlcsbp
