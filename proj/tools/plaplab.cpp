#include <iostream>
#include <list>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using plaplab::RunConfig;

struct Binding {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

class FlagTable {
 public:
  void add(CLI::App* sub, const std::string& flag, const std::string& key) {
    std::string help = key;
    for (const auto& info : plaplab::known_keys()) {
      if (info.key == key) help = info.help + " [" + key + "]";
    }
    auto& b = bindings_.emplace_back(Binding{key, {}, nullptr});
    b.option = sub->add_option(flag, b.value, help);
  }

  void apply(RunConfig& config) const {
    for (const auto& b : bindings_) {
      if (b.option->count() > 0) config.set(b.key, b.value);
    }
  }

 private:
  std::list<Binding> bindings_;
};

void add_problem_flags(FlagTable& flags, CLI::App* sub) {
  flags.add(sub, "--n", "problem.n");
  flags.add(sub, "--p", "problem.p");
  flags.add(sub, "--lambda", "problem.lambda");
  flags.add(sub, "--f,--nonlinearity", "problem.nonlinearity");
  flags.add(sub, "--m", "problem.m");
  flags.add(sub, "--table", "problem.table");
  flags.add(sub, "--N", "grid.N");
  flags.add(sub, "--r-min", "grid.r_min");
}

void add_solver_flags(FlagTable& flags, CLI::App* sub) {
  flags.add(sub, "--tol-abs", "solver.tol_abs");
  flags.add(sub, "--tol-rel", "solver.tol_rel");
  flags.add(sub, "--u-max", "solver.u_max");
  flags.add(sub, "--k-max", "solver.k_max");
}

void add_stability_flags(FlagTable& flags, CLI::App* sub) {
  flags.add(sub, "--r-trunc", "stability.r_trunc");
  flags.add(sub, "--n-eig", "stability.n_eig");
  flags.add(sub, "--tol-eig", "stability.tol_eig");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plaplab: radial p-Laplacian solver, stability and regularity checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", plaplab::tool_version());

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  bool force = false;
  std::vector<std::string> assignments;
  app.add_option("--config", config_path, "INI file with [section] key = value lines")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory [output.dir]");
  app.add_option("--jobs", jobs, "parallel sweep points")->check(CLI::PositiveNumber);
  app.add_flag("--force", force, "recompute sweep points that already have output");
  app.add_option("--set", assignments, "override a config key: section.key=value");

  FlagTable flags;
  auto* exponents = app.add_subcommand("exponents", "critical dimension, q0, q1, m_cs, regime");
  flags.add(exponents, "--n", "problem.n");
  flags.add(exponents, "--p", "problem.p");

  auto* solve = app.add_subcommand("solve", "minimal solution, stability and estimates");
  add_problem_flags(flags, solve);
  add_solver_flags(flags, solve);
  add_stability_flags(flags, solve);

  auto* lambda_star = app.add_subcommand("lambda-star", "bracket the extremal parameter");
  add_problem_flags(flags, lambda_star);
  add_solver_flags(flags, lambda_star);
  flags.add(lambda_star, "--lambda-start", "solver.lambda_start");
  flags.add(lambda_star, "--lambda-cap", "solver.lambda_cap");
  flags.add(lambda_star, "--tol-lambda", "solver.tol_lambda");

  auto* bifurcate = app.add_subcommand("bifurcate", "branch points lambda(u(0)) by shooting");
  add_problem_flags(flags, bifurcate);
  flags.add(bifurcate, "--m-min", "bifurcate.m_min");
  flags.add(bifurcate, "--m-max", "bifurcate.m_max");
  flags.add(bifurcate, "--count", "bifurcate.count");
  flags.add(bifurcate, "--spacing", "bifurcate.spacing");
  flags.add(bifurcate, "--boundary-tol", "solver.boundary_tol");
  flags.add(bifurcate, "--secant-max", "solver.secant_max");

  auto* stability = app.add_subcommand("stability", "minimal eigenvalue of the quadratic form");
  add_problem_flags(flags, stability);
  add_solver_flags(flags, stability);
  add_stability_flags(flags, stability);
  flags.add(stability, "--source", "stability.source");
  flags.add(stability, "--profile", "stability.profile");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks of a preset");
  flags.add(verify, "--preset", "verify.preset");

  auto* sweep = app.add_subcommand("sweep", "run a command over a parameter grid");
  add_problem_flags(flags, sweep);
  flags.add(sweep, "--command", "sweep.command");
  flags.add(sweep, "--ns", "sweep.n");
  flags.add(sweep, "--ps", "sweep.p");
  flags.add(sweep, "--lambdas", "sweep.lambda");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return plaplab::kExitUsage;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config.load_ini(config_path);
    for (const auto& a : assignments) config.apply_assignment(a);
    flags.apply(config);
    if (!out_dir.empty()) config.set("output.dir", out_dir);
  } catch (const std::exception& e) {
    std::cerr << "plaplab: " << e.what() << "\n";
    return plaplab::kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto result = plaplab::run_command(command, config, {jobs, force});
  std::cout << result.report.dump(2) << "\n";
  if (result.report.contains("error")) {
    std::cerr << "plaplab: " << result.report["error"]["type"].get<std::string>() << ": "
              << result.report["error"]["message"].get<std::string>() << "\n";
  }
  return result.exit_code;
}
