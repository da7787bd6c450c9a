#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "acceptance.hpp"
#include "plap/estimates.hpp"
#include "plap/exponents.hpp"
#include "plap/field.hpp"
#include "plap/oracle.hpp"
#include "plap/solver.hpp"
#include "plap/stability.hpp"

namespace plaplab {

namespace fs = std::filesystem;
using namespace plap;

int classify_exception(const std::exception_ptr& error, std::string& type, std::string& message) {
  try {
    std::rethrow_exception(error);
  } catch (const InvalidArgument& e) {
    type = "InvalidArgument";
    message = e.what();
    return kExitUsage;
  } catch (const RegimeMismatch& e) {
    type = "RegimeMismatch";
    message = e.what();
    return kExitUsage;
  } catch (const NoDivergence& e) {
    type = "NoDivergence";
    message = e.what();
    return kExitMath;
  } catch (const BlowUp& e) {
    type = "BlowUp";
    message = e.what();
    return kExitMath;
  } catch (const MathOutcome& e) {
    type = "MathOutcome";
    message = e.what();
    return kExitMath;
  } catch (const EvaluationError& e) {
    type = "EvaluationError";
    message = e.what();
    return kExitMath;
  } catch (const PreconditionFailed& e) {
    type = "PreconditionFailed";
    message = e.what();
    return kExitMath;
  } catch (const InternalError& e) {
    type = "InternalError";
    message = e.what();
    return kExitInternal;
  } catch (const std::exception& e) {
    type = "InternalError";
    message = e.what();
    return kExitInternal;
  } catch (...) {
    type = "InternalError";
    message = "unknown exception";
    return kExitInternal;
  }
}

namespace {

DerivativeFn derivative_of(const Nonlinearity& g) {
  return [g](double t) { return g.g_prime(t); };
}

/// Shortest text that reads back to the same double.
std::string shortest(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

struct Outputs {
  fs::path dir;
  bool json = false;
  bool csv = false;

  explicit Outputs(const RunConfig& config) : dir(config.get("output.dir")) {
    std::stringstream stream(config.get("output.formats"));
    std::string item;
    while (std::getline(stream, item, ',')) {
      if (item == "json") {
        json = true;
      } else if (item == "csv") {
        csv = true;
      } else if (!item.empty()) {
        throw InvalidArgument("output.formats: unknown format '" + item + "'");
      }
    }
  }
};

Json grid_json(const RadialGrid& grid) {
  return {{"r_min", grid.r_min()}, {"N", grid.size()}, {"log_step", grid.log_step()}};
}

Json exponents_json(const ExponentReport& report) {
  return {{"n", report.n},
          {"p", report.p},
          {"critical_dimension", report.critical_dimension},
          {"q0", to_json(report.q0)},
          {"q1", to_json(report.q1)},
          {"m_cs", to_json(report.m_cs)},
          {"regime", regime_letter(report.regime)},
          {"non_integer_dimension", report.non_integer_dimension},
          {"summary", report.summary}};
}

Json stability_json(const StabilityReport& report) {
  return {{"mu_1", report.mu_1},
          {"mu_lower", report.mu_lower},
          {"mu_upper", report.mu_upper},
          {"rayleigh_min", report.rayleigh_min},
          {"scale", report.scale},
          {"verdict", verdict_name(report.verdict)},
          {"r_trunc", report.r_trunc},
          {"n_eig", report.n_eig},
          {"tol_eig", report.tol_eig},
          {"mu_1_coarse_trunc", report.mu_1_coarse_trunc}};
}

Json norm_list_json(const std::vector<std::pair<double, ExtendedReal>>& norms) {
  Json out = Json::array();
  for (const auto& [q, value] : norms) out.push_back({{"q", q}, {"norm", to_json(value)}});
  return out;
}

Json estimates_json(const EstimateReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"bound", c.bound},
                      {"detail", c.detail}});
  }
  Json out = {{"regime", regime_letter(report.regime)},
              {"non_integer_dimension", report.non_integer_dimension},
              {"sup_norm", to_json(report.sup_norm)},
              {"w1p_norm", report.w1p_norm},
              {"gradient_lp", report.gradient_lp},
              {"lq_norms", norm_list_json(report.lq_norms)},
              {"w1q_norms", norm_list_json(report.w1q_norms)},
              {"target_growth", report.target_growth},
              {"checks", checks},
              {"passed", report.passed()}};
  out["fitted_growth"] = report.fitted_growth ? Json(*report.fitted_growth) : Json(nullptr);
  return out;
}

Json divergence_json(const Divergence& div) {
  return {{"status", "divergent"},
          {"iterations", div.iterations},
          {"last_sup", div.last_sup},
          {"reason", div.reason}};
}

Json header(std::string_view command, const RunConfig& config) {
  return report_header(command, config.to_json());
}

void finish(const Outputs& out, std::string_view command, const Json& report) {
  if (out.json) write_json(out.dir / (std::string(command) + ".json"), report);
}

// ------------------------------------------------------------------ commands

CommandOutput cmd_exponents(const RunConfig& config) {
  const auto report = classify_regime(config.get_double("problem.n"),
                                      config.get_double("problem.p"));
  Json json = header("exponents", config);
  json["result"] = exponents_json(report);
  return {json, kExitOk};
}

CommandOutput cmd_solve(const RunConfig& config) {
  const Outputs out(config);
  const auto spec = config.problem();
  const auto grid = config.grid();
  Json json = header("solve", config);
  json["grid"] = grid_json(grid);
  auto outcome = minimal_iterate(spec, grid, config.iteration());
  if (const auto* div = std::get_if<Divergence>(&outcome)) {
    json["result"] = divergence_json(*div);
    finish(out, "solve", json);
    return {json, kExitMath};
  }
  const auto& solution = std::get<MinimalSolution>(outcome);
  const auto& profile = solution.profile;
  if (out.csv) write_profile_csv(out.dir / "profile.csv", profile);

  const SplineField field(profile);
  const auto stability =
      analyze_stability(field, derivative_of(spec.nonlinearity), config.stability());
  Json result = {{"status", "converged"},
                 {"iterations", solution.iterations},
                 {"center_value", solution.center_value},
                 {"sup_norm", profile.u().front()},
                 {"ode_residual", ode_residual(profile, spec.nonlinearity)},
                 {"exponents", exponents_json(classify_regime(spec.n, spec.p))},
                 {"stability", stability_json(stability)}};
  if (stability.verdict == Verdict::SemiStable) {
    result["estimates"] = estimates_json(check_theorem1(profile.normalized(), spec, stability));
  } else {
    result["estimates"] = nullptr;
  }
  json["result"] = result;
  finish(out, "solve", json);
  return {json, kExitOk};
}

std::string records_csv(const std::vector<LambdaRecord>& records) {
  std::string csv = "lambda,converged,iterations,sup_norm,w1p_norm,f_l1_norm,reason\n";
  for (const auto& r : records) {
    csv += format_double(r.lambda) + "," + (r.converged ? "1" : "0") + "," +
           std::to_string(r.iterations) + "," + format_double(r.sup_norm) + "," +
           format_double(r.w1p_norm) + "," + format_double(r.f_l1_norm) + ",\"" + r.reason +
           "\"\n";
  }
  return csv;
}

CommandOutput cmd_lambda_star(const RunConfig& config) {
  const Outputs out(config);
  const auto spec = config.problem();
  const auto grid = config.grid();
  Json json = header("lambda-star", config);
  json["grid"] = grid_json(grid);
  const auto result = lambda_star_estimate(spec, grid, config.lambda_controls());
  if (out.csv) write_atomic(out.dir / "lambda_sweep.csv", records_csv(result.records));

  Json records = Json::array();
  for (const auto& r : result.records) {
    records.push_back({{"lambda", r.lambda},
                       {"converged", r.converged},
                       {"iterations", r.iterations},
                       {"sup_norm", r.sup_norm},
                       {"w1p_norm", r.w1p_norm},
                       {"f_l1_norm", r.f_l1_norm},
                       {"reason", r.reason}});
  }
  Json uniform;
  try {
    const auto bound = uniform_bound_check(result);
    uniform = {{"quantity", bound.quantity},
               {"monotone", bound.monotone},
               {"final_value", bound.final_value},
               {"extrapolated", bound.extrapolated},
               {"ratio", bound.ratio},
               {"extrapolation_ok", bound.extrapolation_ok},
               {"passed", bound.passed}};
  } catch (const Error& e) {
    uniform = {{"error", e.what()}};
  }
  json["result"] = {{"lambda_lo", result.lambda_lo},
                    {"lambda_hi", result.lambda_hi},
                    {"lambda_star_estimate", result.lambda_star_estimate},
                    {"uniform_bound", uniform},
                    {"records", records}};
  finish(out, "lambda-star", json);
  return {json, kExitOk};
}

std::vector<double> centre_values(const RunConfig& config) {
  const double lo = config.get_double("bifurcate.m_min");
  const double hi = config.get_double("bifurcate.m_max");
  const std::size_t count = config.get_size("bifurcate.count");
  const std::string& spacing = config.get("bifurcate.spacing");
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw InvalidArgument("bifurcate needs 0 < m_min < m_max and count >= 2");
  }
  std::vector<double> centres(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    if (spacing == "linear") {
      centres[i] = lo + t * (hi - lo);
    } else if (spacing == "log") {
      centres[i] = lo * std::pow(hi / lo, t);
    } else {
      throw InvalidArgument("bifurcate.spacing must be linear or log");
    }
  }
  centres.back() = hi;
  return centres;
}

CommandOutput cmd_bifurcate(const RunConfig& config) {
  const Outputs out(config);
  const auto spec = config.problem();
  const auto grid = config.grid();
  const auto points =
      bifurcation_curve(spec, centre_values(config), grid, config.boundary_controls());
  std::string csv = "center,lambda,boundary_value,iterations,converged,message\n";
  Json rows = Json::array();
  for (const auto& b : points) {
    csv += format_double(b.center) + "," + format_double(b.lambda) + "," +
           format_double(b.boundary_value) + "," + std::to_string(b.iterations) + "," +
           (b.converged ? "1" : "0") + ",\"" + b.message + "\"\n";
    rows.push_back({{"center", b.center},
                    {"lambda", b.lambda},
                    {"boundary_value", b.boundary_value},
                    {"iterations", b.iterations},
                    {"converged", b.converged},
                    {"message", b.message}});
  }
  if (out.csv) write_atomic(out.dir / "bifurcation.csv", csv);
  Json json = header("bifurcate", config);
  json["grid"] = grid_json(grid);
  json["result"] = {{"points", rows}};
  finish(out, "bifurcate", json);
  return {json, kExitOk};
}

CommandOutput cmd_stability(const RunConfig& config) {
  const Outputs out(config);
  const std::string& source = config.get("stability.source");
  Json json = header("stability", config);
  StabilityReport report;
  if (source == "exact") {
    const auto spec = config.problem();
    const auto kind = spec.nonlinearity.kind();
    if (kind == Nonlinearity::Kind::Tabulated) {
      throw InvalidArgument("stability.source = exact needs an exponential or power f");
    }
    const auto exact = kind == Nonlinearity::Kind::Exponential
                           ? exact_exponential(spec.n, spec.p)
                           : exact_power(spec.n, spec.p, spec.nonlinearity.m());
    report = analyze_stability(exact, derivative_of(exact.nonlinearity()), config.stability());
    json["exact"] = {{"lambda_star", exact.lambda_star()},
                     {"singularity_exponent", exact.singularity_exponent()}};
  } else if (source == "minimal" || source == "file") {
    const auto spec = config.problem();
    std::optional<RadialProfile> profile;
    if (source == "file") {
      const std::string& path = config.get("stability.profile");
      if (path.empty()) throw InvalidArgument("stability.profile is required for source = file");
      if (!fs::exists(path)) throw InvalidArgument("profile file '" + path + "' does not exist");
      profile = read_profile_csv(path, spec.n, spec.p);
    } else {
      const auto grid = config.grid();
      json["grid"] = grid_json(grid);
      auto outcome = minimal_iterate(spec, grid, config.iteration());
      if (const auto* div = std::get_if<Divergence>(&outcome)) {
        json["result"] = divergence_json(*div);
        finish(out, "stability", json);
        return {json, kExitMath};
      }
      profile = std::get<MinimalSolution>(std::move(outcome)).profile;
    }
    const SplineField field(*profile);
    report = analyze_stability(field, derivative_of(spec.nonlinearity), config.stability());
  } else {
    throw InvalidArgument("stability.source must be minimal, exact or file");
  }
  json["result"] = stability_json(report);
  finish(out, "stability", json);
  return {json, kExitOk};
}

CommandOutput cmd_verify(const RunConfig& config) {
  const Outputs out(config);
  const std::string& preset = config.get("verify.preset");
  const auto ids = preset_criteria(preset);
  Json criteria = Json::array();
  bool all = true;
  for (int id : ids) {
    const auto r = run_criterion(id, out.dir / "verify-scratch");
    all = all && r.passed;
    criteria.push_back({{"id", r.id},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"detail", r.detail},
                        {"seconds", r.seconds}});
  }
  Json json = header("verify", config);
  json["result"] = {{"preset", preset}, {"passed", all}, {"criteria", criteria}};
  finish(out, "verify", json);
  return {json, all ? kExitOk : kExitMath};
}

// --------------------------------------------------------------------- sweep

struct SweepPoint {
  std::size_t index = 0;
  std::string n;
  std::string p;
  std::string lambda;
};

std::vector<std::string> axis(const RunConfig& config, const std::string& key,
                              const std::string& fallback_key, bool& any_set) {
  const auto values = config.get_list(key);
  if (values.empty()) return {config.get(fallback_key)};
  any_set = true;
  std::vector<std::string> out;
  for (double v : values) out.push_back(shortest(v));
  return out;
}

std::string key_result(const std::string& command, const Json& result) {
  if (!result.is_object()) return "";
  auto number = [&](const char* key) {
    return result.contains(key) && result[key].is_number()
               ? format_double(result[key].get<double>())
               : std::string{};
  };
  if (command == "lambda-star") return number("lambda_star_estimate");
  if (command == "solve") return number("center_value");
  if (command == "exponents") return result.value("regime", "");
  if (command == "stability") return result.value("verdict", "");
  return "";
}

Json run_point(const RunConfig& base, const SweepPoint& point, const fs::path& dir,
               const std::string& command) {
  RunConfig config = base;
  config.set("problem.n", point.n);
  config.set("problem.p", point.p);
  config.set("problem.lambda", point.lambda);
  config.set("output.dir", dir.string());
  const auto result = run_command(command, config);
  if (!fs::exists(dir / (command + ".json"))) write_json(dir / (command + ".json"), result.report);

  std::string status = "ok";
  if (result.report.contains("error")) {
    status = "error:" + result.report["error"].value("type", std::string("unknown"));
  } else if (result.exit_code != kExitOk) {
    status = "math-outcome";
  }
  const Json empty;
  const Json& body = result.report.contains("result") ? result.report["result"] : empty;
  return {{"index", point.index},       {"n", point.n},
          {"p", point.p},               {"lambda", point.lambda},
          {"command", command},         {"exit_code", result.exit_code},
          {"status", status},           {"key_result", key_result(command, body)}};
}

CommandOutput cmd_sweep(const RunConfig& config, const RunOptions& options) {
  const Outputs out(config);
  const std::string& command = config.get("sweep.command");
  if (command != "exponents" && command != "solve" && command != "lambda-star" &&
      command != "stability") {
    throw InvalidArgument("sweep.command must be exponents, solve, lambda-star or stability");
  }
  bool any_set = false;
  const auto ns = axis(config, "sweep.n", "problem.n", any_set);
  const auto ps = axis(config, "sweep.p", "problem.p", any_set);
  const auto lambdas = axis(config, "sweep.lambda", "problem.lambda", any_set);
  if (!any_set) throw InvalidArgument("empty parameter grid: set sweep.n, sweep.p or sweep.lambda");

  std::vector<SweepPoint> points;
  for (const auto& n : ns) {
    for (const auto& p : ps) {
      for (const auto& lambda : lambdas) points.push_back({points.size(), n, p, lambda});
    }
  }

  std::vector<Json> rows(points.size());
  std::vector<int> skipped(points.size(), 0);
  const int jobs = std::max(1, options.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t i = 0; i < points.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "point-%04zu", i);
    const fs::path dir = out.dir / "points" / name;
    const fs::path marker = dir / "point.json";
    try {
      if (!options.force && fs::exists(marker)) {
        std::ifstream in(marker);
        rows[i] = Json::parse(in);
        skipped[i] = 1;
        continue;
      }
      rows[i] = run_point(config, points[i], dir, command);
      rows[i]["dir"] = (fs::path("points") / name).generic_string();
      write_json(marker, rows[i]);
    } catch (const std::exception& e) {
      rows[i] = {{"index", i},         {"n", points[i].n},       {"p", points[i].p},
                 {"lambda", points[i].lambda}, {"command", command}, {"exit_code", kExitInternal},
                 {"status", std::string("error:") + e.what()},   {"key_result", ""},
                 {"dir", (fs::path("points") / name).generic_string()}};
    }
  }

  std::string index = "index,n,p,lambda,command,exit_code,status,key_result,dir\n";
  for (const auto& row : rows) {
    index += std::to_string(row["index"].get<std::size_t>()) + "," +
             row["n"].get<std::string>() + "," + row["p"].get<std::string>() + "," +
             row["lambda"].get<std::string>() + "," + row["command"].get<std::string>() + "," +
             std::to_string(row["exit_code"].get<int>()) + ",\"" +
             row["status"].get<std::string>() + "\"," + row["key_result"].get<std::string>() +
             "," + row["dir"].get<std::string>() + "\n";
  }
  write_atomic(out.dir / "index.csv", index);

  std::size_t resumed = 0;
  for (int s : skipped) resumed += static_cast<std::size_t>(s);
  Json json = header("sweep", config);
  json["result"] = {{"points", points.size()},
                    {"resumed", resumed},
                    {"index", (out.dir / "index.csv").string()}};
  finish(out, "sweep", json);
  return {json, kExitOk};
}

}  // namespace

CommandOutput run_command(const std::string& command, const RunConfig& config,
                          const RunOptions& options) {
  try {
    if (command == "exponents") return cmd_exponents(config);
    if (command == "solve") return cmd_solve(config);
    if (command == "lambda-star") return cmd_lambda_star(config);
    if (command == "bifurcate") return cmd_bifurcate(config);
    if (command == "stability") return cmd_stability(config);
    if (command == "verify") return cmd_verify(config);
    if (command == "sweep") return cmd_sweep(config, options);
    throw InvalidArgument("unknown command '" + command + "'");
  } catch (...) {
    std::string type;
    std::string message;
    const int code = classify_exception(std::current_exception(), type, message);
    Json json = report_header(command, config.to_json());
    json["error"] = {{"type", type}, {"message", message}};
    try {
      const Outputs out(config);
      if (out.json && command != "exponents") {
        write_json(out.dir / (command + ".json"), json);
      }
    } catch (...) {
      // Reporting the original error matters more than saving it.
    }
    return {json, code};
  }
}

}  // namespace plaplab
