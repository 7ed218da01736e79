#include <CLI11.hpp>

#include <iostream>

#include "gcgeo/checks.hpp"
#include "gcgeo/scene.hpp"

using namespace gcgeo;

namespace {

void print_summary(const std::vector<CheckResult>& results, std::ostream& os) {
  int pass = 0, fail = 0, inc = 0;
  for (const auto& r : results) {
    os << (r.status == "pass" ? "[ ok ] " : r.status == "fail" ? "[FAIL] " : "[ ?? ] ")
       << r.name << "  residual ";
    if (std::isnan(r.max_residual))
      os << "n/a";
    else
      os << r.max_residual;
    os << "  tol " << r.tolerance << "  (" << r.samples << " samples)\n";
    if (r.status == "pass") ++pass;
    if (r.status == "fail") ++fail;
    if (r.status == "inconclusive") ++inc;
  }
  os << pass << " passed, " << fail << " failed, " << inc << " inconclusive\n";
}

int run_and_report(const std::vector<std::pair<std::string, CheckFn>>& fns,
                   const RunConfig& cfg, bool json_only) {
  std::vector<CheckResult> results = run_check_fns(fns, cfg);
  std::cout << report_json(results, cfg).dump(2) << std::endl;
  if (!json_only) print_summary(results, std::cerr);
  return report_exit_code(results);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification suites for split-pairing fibres, pure spinors, gauge covers "
               "and local symplectic groupoids"};
  app.require_subcommand(1);

  std::string builtin, scene_path, point_str;
  uint64_t seed = 42;
  int samples = 64;
  double tol = 0.0;
  bool json_only = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    cmd->add_option("--samples", samples, "sample points per check")->capture_default_str();
    cmd->add_option("--tol", tol, "override every per-check tolerance");
    cmd->add_flag("--json-only", json_only, "suppress the human summary on stderr");
  };

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--builtin", builtin, "built-in suite name");
  verify->add_option("--scene", scene_path, "scene JSON file");
  add_common(verify);

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "pointwise invariants of the built-in shell geometry");
  classify_cmd->add_option("--builtin", builtin, "fixture name (hopf)")->required();
  classify_cmd->add_option("--point", point_str, "comma-separated a1,b1,a2,b2")->required();

  CLI::App* list_cmd = app.add_subcommand("list", "list built-in suites and checks");

  CLI::App* export_cmd = app.add_subcommand("export", "emit a fixture as a scene document");
  export_cmd->add_option("--builtin", builtin, "fixture name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      if (builtin.empty() == scene_path.empty()) {
        std::cerr << "verify: pass exactly one of --builtin or --scene\n";
        return 2;
      }
      if (!builtin.empty()) {
        RunConfig cfg;
        cfg.seed = seed;
        cfg.samples = samples;
        cfg.tol_override = tol;
        const auto& reg = check_registry();
        std::vector<std::pair<std::string, CheckFn>> fns;
        for (const auto& n : builtin_suite(builtin)) fns.emplace_back(n, reg.at(n));
        return run_and_report(fns, cfg, json_only);
      }
      Scene scene = load_scene_file(scene_path);
      if (verify->count("--seed")) scene.config.seed = seed;
      if (verify->count("--samples")) scene.config.samples = samples;
      if (verify->count("--tol")) scene.config.tol_override = tol;
      return run_and_report(scene.checks, scene.config, json_only);
    }
    if (classify_cmd->parsed()) {
      if (builtin != "hopf") {
        std::cerr << "classify: only the 'hopf' fixture is pointwise-classifiable\n";
        return 2;
      }
      RVec p(4);
      std::stringstream ss(point_str);
      std::string tok;
      int k = 0;
      while (std::getline(ss, tok, ',') && k < 4) p(k++) = std::stod(tok);
      if (k != 4) {
        std::cerr << "classify: --point needs four comma-separated reals\n";
        return 2;
      }
      PointClass c = classify_hopf_point(p);
      nlohmann::ordered_json out;
      out["poisson_rank"] = c.poisson_rank;
      out["type"] = c.type;
      out["parity_ok"] = c.parity_ok;
      std::cout << out.dump(2) << std::endl;
      return 0;
    }
    if (list_cmd->parsed()) {
      std::cout << "suites:\n";
      for (const auto& s : builtin_names()) std::cout << "  " << s << "\n";
      std::cout << "checks:\n";
      for (const auto& n : all_check_names()) std::cout << "  " << n << "\n";
      return 0;
    }
    if (export_cmd->parsed()) {
      std::cout << export_scene(builtin).dump(2) << std::endl;
      return 0;
    }
  } catch (const SamplingError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
