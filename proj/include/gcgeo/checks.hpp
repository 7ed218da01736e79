#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "gcgeo/types.hpp"

namespace gcgeo {

struct RunConfig {
  uint64_t seed = 42;
  int samples = 64;
  double tol_override = 0.0;  // 0 = per-check default
  std::map<std::string, double> tol_by_check;

  double tolerance_for(const std::string& name, double fallback) const {
    auto it = tol_by_check.find(name);
    if (it != tol_by_check.end()) return it->second;
    return tol_override > 0.0 ? tol_override : fallback;
  }
  Rng rng_for(const std::string& name) const { return Rng(seed).fork(name); }
};

struct CheckResult {
  std::string name;
  std::string description;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string status;  // pass | fail | inconclusive
};

using CheckFn = std::function<CheckResult(const RunConfig&)>;

const std::map<std::string, CheckFn>& check_registry();
std::vector<std::string> all_check_names();
// Built-in suites: hopf, phi22, pair-groupoid, linear, courant, localization, all.
std::vector<std::string> builtin_suite(const std::string& name);
std::vector<std::string> builtin_names();

std::vector<CheckResult> run_checks(const std::vector<std::string>& names,
                                    const RunConfig& cfg, bool parallel = true);
// Same runner for ad-hoc (e.g. scene-defined) checks.
std::vector<CheckResult> run_check_fns(const std::vector<std::pair<std::string, CheckFn>>& fns,
                                       const RunConfig& cfg, bool parallel = true);

nlohmann::ordered_json report_json(const std::vector<CheckResult>& results,
                                   const RunConfig& cfg);
// 0 all pass, 1 any fail, 3 inconclusive only.
int report_exit_code(const std::vector<CheckResult>& results);

// Helper shared by checks and the CLI: point classification on the shell
// geometry via the annihilator of the spinor line.
struct PointClass {
  int poisson_rank;
  int type;
  bool parity_ok;
};
PointClass classify_hopf_point(const RVec& p);

}  // namespace gcgeo
