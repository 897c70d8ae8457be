#include <doctest.h>

#include <string>

#include "nlcsbp/config.hpp"

using namespace nlcsbp;

namespace {
bool mentions(const ConfigResult& r, const std::string& a, const std::string& b = "") {
  for (const auto& e : r.errors)
    if (e.find(a) != std::string::npos && e.find(b) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST_CASE("minimal exit config") {
  const auto r = validate_config("experiment = exit\n");
  REQUIRE(r.config);
  CHECK(r.errors.empty());
  CHECK(r.config->x0 == 2.0);
  CHECK(r.config->a == 1.0);
  CHECK(r.config->mechanism->family_name() == "stable_minus_drift");
}

TEST_CASE("full config") {
  const auto r = validate_config(
      "experiment = regime\n[mechanism]\nfamily = log_tail\nr = 2\n[rate]\nkappa = 1\nbeta = 1\n"
      "[run]\ncase = 3\nn = 500\nseed = 9\nt_grid = 0.1, 0.03\n[output]\ncsv = a.csv\njson = a.json\n");
  REQUIRE(r.config);
  CHECK(r.config->speed_case == SpeedCase::Case3);
  CHECK(r.config->t_grid == std::vector<double>{0.1, 0.03});
  CHECK(r.config->run.seed == 9);
  CHECK(r.config->csv_path == "a.csv");
}

TEST_CASE("rho needs beta above alpha") {
  const auto r = validate_config("experiment = rho\n[mechanism]\nfamily = stable\nalpha = 0.5\n[rate]\nbeta = 0.5\n");
  CHECK_FALSE(r.config);
  CHECK(mentions(r, "beta", "beta > alpha"));
}

TEST_CASE("unknown keys are rejected") {
  const auto r = validate_config("experiment = rho\n[mechanism]\ngamma_ = 1\n");
  CHECK_FALSE(r.config);
  CHECK(mentions(r, "gamma_", "unknown key"));
  CHECK(mentions(validate_config("experiment = rho\n[extra]\nk = 1\n"), "extra", "unknown section"));
  CHECK(mentions(validate_config("experiment = nope\n"), "experiment", "unknown experiment"));
}

TEST_CASE("range and type errors name the key") {
  CHECK(mentions(validate_config("experiment = rho\n[run]\nn = 0\n"), "run.n", "n >= 1"));
  CHECK(mentions(validate_config("experiment = rho\n[run]\nn = many\n"), "run.n"));
  CHECK(mentions(validate_config("experiment = exit\n[run]\nx0 = 0.5\n"), "run.x0", "x0 > a"));
  CHECK(mentions(validate_config("experiment = overshoot\n[mechanism]\nfamily = stable\nalpha = 1.5\n"), "mechanism.stable"));
  CHECK(mentions(validate_config("experiment = regime\n[mechanism]\nfamily = stable\n[run]\ncase = 2\n"), "run.case"));
  CHECK(mentions(validate_config("[bad\n"), "malformed"));
}

TEST_CASE("overrides win over the document") {
  const auto r = validate_config("experiment = rho\n[run]\nn = 10\n", {{"run.n", "25"}, {"run.seed", "4"}});
  REQUIRE(r.config);
  CHECK(r.config->run.n == 25);
  CHECK(r.config->run.seed == 4);
}

TEST_CASE("rho defaults carry the stable target") {
  const auto r = validate_config("experiment = rho\n", {{"run.n", "200"}});
  REQUIRE(r.config);
  const auto rep = run_config(*r.config);
  REQUIRE(!rep.estimates.empty());
  CHECK(rep.estimates[0].label == "mean");
  CHECK(rep.estimates[0].target == doctest::Approx(1.1283791671).epsilon(1e-10));
}
