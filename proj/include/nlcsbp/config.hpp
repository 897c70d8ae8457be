#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlcsbp/experiments.hpp"
#include "nlcsbp/mechanisms.hpp"

namespace nlcsbp {

struct ExperimentInfo {
  std::string name;
  std::string anchor;
};

const std::vector<ExperimentInfo>& experiment_catalog();

struct RunConfig {
  std::string experiment;
  std::optional<BranchingMechanism> mechanism;
  double kappa = 1.0;
  double beta = 1.0;
  RunSettings run;
  std::vector<double> t_grid;
  double level = 1e3;
  double x0 = 1.0;
  double a = 1.0;
  SpeedCase speed_case = SpeedCase::Case1;
  std::string csv_path;
  std::string json_path;
};

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;
};

// overrides are "section.key" (or "experiment") to raw value, applied over the document
ConfigResult validate_config(const std::string& text,
                             const std::vector<std::pair<std::string, std::string>>& overrides = {});

ExperimentReport run_config(const RunConfig& cfg);

}  // namespace nlcsbp
