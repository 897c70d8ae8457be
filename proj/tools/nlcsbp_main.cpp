#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nlcsbp/config.hpp"
#include "nlcsbp/csbp.hpp"
#include "nlcsbp/errors.hpp"
#include "nlcsbp/levy_sim.hpp"
#include "nlcsbp/limit_laws.hpp"
#include "nlcsbp/report.hpp"

using namespace nlcsbp;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitIo = 3;

struct MechOpts {
  std::string family = "stable";
  double c0 = 1.0, alpha = 0.5, delta = 1.0, r = 2.0, gamma = 2.0, c = 1.0;
  double kappa = 1.0, beta = 1.0, x0 = 1.0;

  void add(CLI::App* app, bool with_rate) {
    app->add_option("--family", family, "stable | pure_drift | log_tail | log_critical | stable_minus_drift")
        ->capture_default_str();
    app->add_option("--c0", c0, "stable scale")->capture_default_str();
    app->add_option("--alpha", alpha, "stable index")->capture_default_str();
    app->add_option("--delta", delta, "pure drift rate")->capture_default_str();
    app->add_option("--r", r, "log tail exponent")->capture_default_str();
    app->add_option("--gamma", gamma, "log critical exponent")->capture_default_str();
    app->add_option("--c", c, "drift of stable minus drift")->capture_default_str();
    if (with_rate) {
      app->add_option("--kappa", kappa, "rate prefactor")->capture_default_str();
      app->add_option("--beta", beta, "rate index")->capture_default_str();
      app->add_option("--x0", x0, "start")->capture_default_str();
    }
  }

  BranchingMechanism mechanism() const {
    if (family == "stable") return StableSubordinator{c0, alpha};
    if (family == "pure_drift") return PureDriftSubordinator{delta};
    if (family == "log_tail") return LogTailSubordinator{r};
    if (family == "log_critical") return LogCriticalSubordinator{gamma};
    if (family == "stable_minus_drift") return StableMinusDrift{c0, alpha, c};
    throw ConfigError("--family: unknown family '" + family + "'");
  }

  Model model() const { return Model(mechanism(), RateFunction(kappa, beta), x0); }
};

std::string experiments_help() {
  std::string s = "Experiments:\n";
  for (const auto& e : experiment_catalog()) s += "  " + e.name + std::string(16 - e.name.size(), ' ') + e.anchor + "\n";
  return s;
}

unsigned default_workers() {
  if (const char* env = std::getenv("NLCSBP_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*env && !*end && v > 0) return static_cast<unsigned>(v);
    throw ConfigError(std::string("NLCSBP_WORKERS: must be a positive integer, got '") + env + "'");
  }
  return 1;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::vector<ExperimentReport>& reports, const std::filesystem::path& csv,
          const std::filesystem::path& json) {
  if (!csv.parent_path().empty()) std::filesystem::create_directories(csv.parent_path());
  if (!json.parent_path().empty()) std::filesystem::create_directories(json.parent_path());
  write_file_atomic(csv, reports_to_csv(reports));
  write_file_atomic(json, reports_to_json(reports).dump(2) + "\n");
}

int summarize(const std::vector<ExperimentReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    std::printf("%-16s %-17s %.2fs\n", r.name.c_str(), to_string(r.verdict).c_str(), r.runtime_seconds);
    ok = ok && is_passing(r.verdict);
  }
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and limit-law checks for nonlinear continuous-state branching processes"};
  app.footer(experiments_help());
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out_dir = ".";

  MechOpts classify_m;
  auto* classify = app.add_subcommand("classify", "explosive / non-explosive / critical verdict");
  classify_m.add(classify, true);

  MechOpts phi_m;
  std::optional<double> phi_x, phi_t;
  auto* phi = app.add_subcommand("phi", "phi(x) = int_x^inf dy/(R(y)(-psi(1/y))), or its inverse with --t");
  phi_m.add(phi, true);
  phi->add_option("--x", phi_x, "evaluate phi at x");
  phi->add_option("--t", phi_t, "evaluate the inverse at t");

  std::string law = "chi_tail";
  double law_alpha = 0.5, law_beta = 1.5, law_c0 = 1.0, law_arg = 2.0;
  int law_n = 1;
  auto* limit = app.add_subcommand("limitlaw", "limit laws: chi_tail chi_density chi_laplace rho_moment rho_mgf weibull_cdf ldp_rate");
  limit->add_option("--law", law)->capture_default_str();
  limit->add_option("--alpha", law_alpha)->capture_default_str();
  limit->add_option("--beta", law_beta)->capture_default_str();
  limit->add_option("--c0", law_c0)->capture_default_str();
  limit->add_option("--arg", law_arg, "z, a, theta or t depending on the law")->capture_default_str();
  limit->add_option("--n", law_n, "moment order")->capture_default_str();

  MechOpts sim_m;
  double horizon = 1.0, grid_dt = 0.01;
  std::string dump_path;
  auto* simulate = app.add_subcommand("simulate", "simulate one parent path, or explosion times with --beta");
  sim_m.add(simulate, true);
  std::uint64_t n_expl = 0;
  double tail_tol = 1e-3;
  simulate->add_option("--horizon", horizon, "path horizon")->capture_default_str();
  simulate->add_option("--grid-dt", grid_dt, "grid step of the recorded path")->capture_default_str();
  simulate->add_option("--dump-path", dump_path, "binary event dump");
  simulate->add_option("--explosions", n_expl, "sample this many explosion times instead of a path");
  simulate->add_option("--tail-tol", tail_tol)->capture_default_str();

  std::string config_path;
  std::vector<std::string> overrides;
  auto* experiment = app.add_subcommand("experiment", "run one experiment from a config file");
  experiment->add_option("--config", config_path, "INI config")->required();
  experiment->add_option("--set", overrides, "override, e.g. run.n=5000");

  auto* suite = app.add_subcommand("suite", "run the full acceptance battery");

  for (auto* sub : {classify, phi, limit, simulate, experiment, suite}) {
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--workers", workers, "worker threads (fallback NLCSBP_WORKERS)");
    sub->add_option("--out", out_dir, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const unsigned nworkers = workers ? *workers : default_workers();
    if (nworkers == 0) throw ConfigError("--workers: must be >= 1");

    if (classify->parsed()) {
      std::cout << classify_regime(classify_m.model()).describe() << "\n";
      return kExitPass;
    }
    if (phi->parsed()) {
      const PhiFunction f(phi_m.model());
      if (phi_t) std::printf("%.12g\n", f.inverse(*phi_t));
      else std::printf("%.12g\n", f(phi_x.value_or(phi_m.x0)));
      return kExitPass;
    }
    if (limit->parsed()) {
      double v;
      if (law == "chi_tail") v = chi_tail(law_alpha, law_arg);
      else if (law == "chi_density") v = chi_density(law_alpha, law_arg);
      else if (law == "chi_laplace") v = chi_laplace(law_alpha, law_arg);
      else if (law == "rho_moment") v = rho_moment(law_alpha, law_beta, law_c0, law_n);
      else if (law == "rho_mgf") v = rho_mgf(law_alpha, law_beta, law_arg);
      else if (law == "weibull_cdf") v = weibull_cdf(law_alpha, law_arg);
      else if (law == "ldp_rate") v = rho_ldp_rate(law_alpha, law_beta, law_c0);
      else throw ConfigError("--law: unknown law '" + law + "'");
      std::printf("%.12g\n", v);
      return kExitPass;
    }
    if (simulate->parsed()) {
      if (n_expl > 0) {
        const ExplosionSimulator sim(sim_m.model());
        const auto t = parallel_map<double>(n_expl, nworkers, [&](std::size_t i) {
          RngStream rng(seed.value_or(1), i);
          return sim.sample(rng, tail_tol).t_inf_estimate;
        });
        for (double v : t) std::printf("%.12g\n", v);
        return kExitPass;
      }
      RngStream rng(seed.value_or(1), 0);
      const auto events = simulate_path(sim_m.mechanism(), sim_m.x0, horizon, grid_dt, rng);
      if (!dump_path.empty()) {
        std::ostringstream os(std::ios::binary);
        write_path_dump(os, events);
        write_file_atomic(dump_path, os.str());
      }
      std::printf("events %zu final %.12g\n", events.size(), events.empty() ? sim_m.x0 : events.back().post_value);
      return kExitPass;
    }
    if (experiment->parsed()) {
      std::vector<std::pair<std::string, std::string>> kv;
      for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + o + "'");
        kv.emplace_back(o.substr(0, eq), o.substr(eq + 1));
      }
      if (seed) kv.emplace_back("run.seed", std::to_string(*seed));
      if (workers || std::getenv("NLCSBP_WORKERS")) kv.emplace_back("run.workers", std::to_string(nworkers));
      const auto res = validate_config(read_text(config_path), kv);
      if (!res.config) {
        for (const auto& e : res.errors) std::cerr << "config error: " << e << "\n";
        return kExitConfig;
      }
      const auto& cfg = *res.config;
      const std::vector<ExperimentReport> reports{run_config(cfg)};
      const std::filesystem::path dir(out_dir);
      emit(reports, cfg.csv_path.empty() ? dir / (cfg.experiment + ".csv") : std::filesystem::path(cfg.csv_path),
           cfg.json_path.empty() ? dir / (cfg.experiment + ".json") : std::filesystem::path(cfg.json_path));
      return summarize(reports);
    }
    if (suite->parsed()) {
      const auto reports = run_suite(seed.value_or(1), nworkers);
      const std::filesystem::path dir(out_dir);
      emit(reports, dir / "suite.csv", dir / "suite.json");
      return summarize(reports);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitFail;
}
