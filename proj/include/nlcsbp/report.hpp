#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlcsbp/experiments.hpp"

namespace nlcsbp {

inline constexpr const char* kCsvHeader = "experiment,label,value,se_or_threshold,target,n,seed,verdict";

std::string format_number(double v);
std::string reports_to_csv(const std::vector<ExperimentReport>& reports);
nlohmann::json report_to_json(const ExperimentReport& report);
nlohmann::json reports_to_json(const std::vector<ExperimentReport>& reports);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace nlcsbp
