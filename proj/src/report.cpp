#include "nlcsbp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::string reports_to_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : reports) {
    const std::string tail = "," + std::to_string(r.n_samples) + "," + std::to_string(r.seed) + "," + to_string(r.verdict);
    for (const auto& e : r.estimates)
      os << csv_field(r.name) << ',' << csv_field(e.label) << ',' << format_number(e.value) << ','
         << format_number(e.std_error) << ',' << format_number(e.target) << tail << '\n';
    for (const auto& k : r.ks)
      os << csv_field(r.name) << ',' << csv_field(k.label) << ',' << format_number(k.statistic) << ','
         << format_number(k.threshold) << ",," << k.n << ',' << r.seed << ',' << to_string(r.verdict) << '\n';
    for (const auto& c : r.checks)
      os << csv_field(r.name) << ',' << csv_field(c.label) << ',' << csv_field(c.observed) << ",,"
         << csv_field(c.expected) << tail << '\n';
  }
  return os.str();
}

nlohmann::json report_to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["n_samples"] = r.n_samples;
  j["estimates"] = nlohmann::json::array();
  for (const auto& e : r.estimates)
    j["estimates"].push_back({{"label", e.label},
                              {"value", num(e.value)},
                              {"std_error", num(e.std_error)},
                              {"target", num(e.target)},
                              {"tolerance", num(e.tolerance)},
                              {"passed", e.passed()}});
  j["ks"] = nlohmann::json::array();
  for (const auto& k : r.ks)
    j["ks"].push_back({{"label", k.label},
                       {"statistic", num(k.statistic)},
                       {"threshold", num(k.threshold)},
                       {"n", k.n},
                       {"passed", k.passed()}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"label", c.label}, {"observed", c.observed}, {"expected", c.expected}, {"passed", c.passed}});
  j["qualitative"] = r.qualitative;
  j["verdict"] = to_string(r.verdict);
  j["seed"] = r.seed;
  j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

nlohmann::json reports_to_json(const std::vector<ExperimentReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(report_to_json(r));
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os << contents;
    os.flush();
    if (!os) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

}  // namespace nlcsbp
