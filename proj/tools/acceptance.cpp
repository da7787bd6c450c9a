#include "acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "plap/estimates.hpp"
#include "plap/exponents.hpp"
#include "plap/field.hpp"
#include "plap/oracle.hpp"
#include "plap/solver.hpp"
#include "plap/stability.hpp"

namespace plaplab {

namespace fs = std::filesystem;
using namespace plap;

namespace {

std::string printf_string(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

DerivativeFn derivative_of(const Nonlinearity& g) {
  return [g](double t) { return g.g_prime(t); };
}

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      passed = false;
      detail += " FAIL";
    }
  }
};

MinimalSolution solve_minimal(const ProblemSpec& spec, const RadialGrid& grid,
                              const RadialProfile* start = nullptr) {
  auto outcome = minimal_iterate(spec, grid, {}, start);
  if (auto* div = std::get_if<Divergence>(&outcome)) {
    throw MathOutcome("minimal iteration diverged: " + div->reason);
  }
  return std::get<MinimalSolution>(std::move(outcome));
}

// Smallest observed order log2(e(N)/e(2N)) over N, 2N, 4N.
double observed_order(const std::function<double(std::size_t)>& error, std::size_t n0) {
  double order = INFINITY;
  double previous = error(n0);
  for (std::size_t n = 2 * n0; n <= 4 * n0; n *= 2) {
    const double current = error(n);
    order = std::min(order, std::log2(previous / current));
    previous = current;
  }
  return order;
}

Outcome critical_dimensions() {
  Outcome out;
  for (auto [p, expected] : {std::pair{3.0, 9.0}, {2.0, 10.0}, {5.0, 10.0}}) {
    const double got = critical_dimension(p);
    out.require(got == expected, printf_string("p=%g -> %.17g", p, got));
  }
  return out;
}

Outcome exponent_identity() {
  Outcome out;
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> p_dist(1.1, 8.0);
  std::uniform_real_distribution<double> excess(0.05, 40.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double p = p_dist(rng);
    const double n = critical_dimension(p) + excess(rng);
    worst = std::max(worst, consistency_q0_mcs(n, p));
  }
  out.require(worst < 1e-9, printf_string("50 draws, max rel err %.3g < 1e-9", worst));
  return out;
}

Outcome oracle_residuals() {
  Outcome out;
  const auto exp12 = exact_exponential(12, 2);
  const auto pow15 = exact_power(15, 2, 5);
  for (const ExactSolution* exact : {&exp12, &pow15}) {
    const auto g = exact->nonlinearity();
    auto residual = [&](std::size_t count) {
      return ode_residual(exact->sample(make_grid(1e-8, count)), g);
    };
    const double r4000 = residual(4000);
    const double order = observed_order(residual, 500);
    const char* label = exact->kind() == ExactSolution::Kind::ExponentialSingular
                            ? "exp(12,2)"
                            : "pow(15,2,5)";
    out.require(r4000 < 1e-8, printf_string("%s residual %.3g < 1e-8", label, r4000));
    out.require(order >= 2.0, printf_string("%s order %.2f >= 2", label, order));
  }
  return out;
}

void check_bracket(Outcome& out, double n, double p, double target) {
  const auto grid = make_grid(1e-8, 2000);
  const auto result = lambda_star_estimate(ProblemSpec{n, p, Nonlinearity::exponential()}, grid);
  const double lo_err = std::abs(result.lambda_lo / target - 1.0);
  const double hi_err = std::abs(result.lambda_hi / target - 1.0);
  out.require(lo_err <= 0.01 && hi_err <= 0.01,
              printf_string("(n=%g,p=%g) [%.7g, %.7g] vs %g", n, p, result.lambda_lo,
                            result.lambda_hi, target));
}

Outcome lambda_star_closed_form() {
  Outcome out;
  check_bracket(out, 12, 2, 20);
  check_bracket(out, 10, 3, 63);
  return out;
}

Outcome lambda_star_liouville() {
  Outcome out;
  check_bracket(out, 2, 2, 2);
  return out;
}

Outcome minimal_branch_stability() {
  Outcome out;
  const auto grid = make_grid(1e-8, 2000);
  for (auto [n, p] : {std::pair{2.0, 2.0}, {5.0, 3.0}}) {
    const ProblemSpec spec{n, p, Nonlinearity::exponential()};
    const double estimate = lambda_star_estimate(spec, grid).lambda_star_estimate;
    std::optional<RadialProfile> previous;
    double worst = INFINITY;
    bool all = true;
    for (double fraction : {0.2, 0.4, 0.6, 0.8, 0.9}) {
      const auto lambda_spec = spec.with_lambda(fraction * estimate);
      auto solution = solve_minimal(lambda_spec, grid, previous ? &*previous : nullptr);
      const SplineField field(solution.profile);
      const auto report = analyze_stability(field, derivative_of(lambda_spec.nonlinearity));
      const double margin = report.mu_1 / report.scale;
      worst = std::min(worst, margin);
      all = all && report.verdict == Verdict::SemiStable && report.mu_1 >= -1e-6 * report.scale;
      previous = std::move(solution.profile);
    }
    out.require(all, printf_string("(n=%g,p=%g) lambda*~%.6g, min mu_1/scale %.4g", n, p,
                                   estimate, worst));
  }
  return out;
}

Outcome stability_threshold() {
  Outcome out;
  for (auto [n, expected] : {std::pair{8.0, Verdict::Unstable}, {9.0, Verdict::Unstable},
                             {11.0, Verdict::SemiStable}, {12.0, Verdict::SemiStable}}) {
    const auto exact = exact_exponential(n, 2);
    const auto report = analyze_stability(exact, derivative_of(exact.nonlinearity()));
    out.require(report.verdict == expected,
                printf_string("n=%g %s (mu_1 %.4g)", n, verdict_name(report.verdict).c_str(),
                              report.mu_1));
  }
  return out;
}

std::vector<TestFunction> identity_families() {
  return {TestFunction::sine_mode(1, 1e-3), TestFunction::power_cutoff(0.5, 1e-2),
          TestFunction::hat(0.1, 0.3, 0.7)};
}

Outcome identity_check() {
  Outcome out;
  const auto families = identity_families();
  const std::vector<ProblemSpec> computed = {
      {2, 2, Nonlinearity::exponential(1.0)},
      {5, 3, Nonlinearity::exponential(10.0)},
  };
  double worst = 0.0;
  double worst_order = INFINITY;
  for (const auto& spec : computed) {
    auto rel_err = [&](std::size_t count, const TestFunction& eta) {
      const auto solution = solve_minimal(spec, make_grid(1e-8, count));
      return lemma21_identity(solution.profile, spec.nonlinearity, eta, 1e-6).rel_err;
    };
    for (const auto& eta : families) {
      worst = std::max(worst, rel_err(2000, eta));
      worst_order = std::min(
          worst_order, observed_order([&](std::size_t c) { return rel_err(c, eta); }, 500));
    }
  }
  const auto exp12 = exact_exponential(12, 2);
  const auto pow15 = exact_power(15, 2, 5);
  for (const ExactSolution* exact : {&exp12, &pow15}) {
    for (const auto& eta : families) {
      const auto r = lemma21_identity(*exact, derivative_of(exact->nonlinearity()), eta);
      worst = std::max(worst, r.rel_err);
    }
  }
  out.require(worst < 1e-4, printf_string("3 families x 4 profiles, max rel err %.3g < 1e-4",
                                          worst));
  out.require(worst_order >= 1.8,
              printf_string("min order %.2f >= 1.8 on computed profiles", worst_order));
  return out;
}

std::vector<TestFunction> random_test_functions() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(0.1, 3.5);
  std::uniform_real_distribution<double> log_eps(std::log(1e-4), std::log(1e-1));
  std::uniform_int_distribution<int> mode(1, 6);
  std::uniform_real_distribution<double> log_r(std::log(1e-4), 0.0);
  std::vector<TestFunction> out;
  for (int i = 0; i < 8; ++i) {
    const double a = alpha(rng);
    out.push_back(TestFunction::power_cutoff(a, std::exp(log_eps(rng))));
  }
  for (int i = 0; i < 6; ++i) {
    const int j = mode(rng);
    out.push_back(TestFunction::sine_mode(j, std::exp(log_eps(rng))));
  }
  for (int i = 0; i < 6; ++i) {
    std::array<double, 3> pts{log_r(rng), log_r(rng), log_r(rng)};
    std::sort(pts.begin(), pts.end());
    out.push_back(TestFunction::hat(std::exp(pts[0]), std::exp(pts[1]), std::exp(pts[2])));
  }
  return out;
}

Outcome hardy_check() {
  Outcome out;
  const auto etas = random_test_functions();
  const auto grid = make_grid(1e-8, 2000);
  const ProblemSpec disk{2, 2, Nonlinearity::exponential(1.0)};
  const ProblemSpec cubic{5, 3, Nonlinearity::exponential(10.0)};
  const SplineField disk_field(solve_minimal(disk, grid).profile);
  const SplineField cubic_field(solve_minimal(cubic, grid).profile);
  const auto exp11 = exact_exponential(11, 2);
  const auto exp12 = exact_exponential(12, 2);
  const std::vector<std::pair<std::string, const RadialField*>> stable = {
      {"minimal(2,2)", &disk_field},
      {"minimal(5,3)", &cubic_field},
      {"exact(11,2)", &exp11},
      {"exact(12,2)", &exp12}};
  for (const auto& [label, field] : stable) {
    const auto results = hardy_inequality_check(*field, etas);
    const auto held = std::count_if(results.begin(), results.end(),
                                     [](const HardyResult& h) { return h.satisfied; });
    out.require(held == static_cast<long>(etas.size()),
                printf_string("%s %ld/%zu hold", label.c_str(), static_cast<long>(held),
                              etas.size()));
  }
  const auto exp8 = exact_exponential(8, 2);
  const auto results = hardy_inequality_check(exp8, etas);
  long violated = 0;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (etas[i].kind() == TestFunction::Kind::PowerCutoff && !results[i].satisfied) ++violated;
  }
  out.require(violated >= 1, printf_string("exact(8,2) power-cutoff violations %ld >= 1", violated));
  return out;
}

Outcome singularity_exponents() {
  Outcome out;
  const auto grid = make_grid(1e-8, 2000);
  const double m = m_cs(15, 2).value();
  const auto fit = singularity_exponent_fit(exact_power(15, 2, m).sample(grid), 1e-7, 1e-1);
  const double target = -0.5 * (15.0 - 2.0 * std::sqrt(14.0) - 4.0);
  out.require(std::abs(fit.slope - target) < 1e-3,
              printf_string("power slope %.9g vs %.9g", fit.slope, target));
  for (double p : {2.0, 3.0}) {
    const double n = p == 2.0 ? 12.0 : 20.0;
    const auto log_fit = log_singularity_fit(exact_exponential(n, p).sample(grid), 1e-7, 1e-1);
    out.require(std::abs(log_fit.slope - p) < 1e-3,
                printf_string("log slope (n=%g,p=%g) %.9g", n, p, log_fit.slope));
  }
  return out;
}

Outcome integrability_thresholds() {
  Outcome out;
  const auto grid = make_grid(1e-8, 2000);
  auto compare = [&](const char* label, std::optional<double> got, double expected) {
    const bool ok = got && std::abs(*got / expected - 1.0) <= 0.02;
    out.require(ok, printf_string("%s %.6g vs %.6g", label, got.value_or(NAN), expected));
  };
  const auto m5 = exact_power(15, 2, 5).sample(grid);
  compare("Lq m=5", integrability_threshold(m5, NormKind::Lq, 1, 100), 15.0 * 4.0 / 2.0);
  const double m = m_cs(15, 2).value();
  const auto critical = exact_power(15, 2, m).sample(grid);
  compare("Lq m_cs", integrability_threshold(critical, NormKind::Lq, 1, 100),
          15.0 * (m - 1.0) / 2.0);
  compare("W1q m_cs", integrability_threshold(critical, NormKind::W1q, 1, 100),
          q_exponent(15, 2, 1).value());
  return out;
}

Outcome uniform_bound() {
  Outcome out;
  const auto grid = make_grid(1e-8, 2000);
  const auto result = lambda_star_estimate(ProblemSpec{12, 2, Nonlinearity::exponential()}, grid);
  const auto bound = uniform_bound_check(result);
  out.require(bound.monotone, "norm sequence monotone");
  out.require(bound.ratio <= 1.05 && bound.extrapolation_ok,
              printf_string("final %.6g / extrapolated %.6g = %.4f <= 1.05", bound.final_value,
                            bound.extrapolated, bound.ratio));
  const auto extremal = extremal_profile(result);
  const auto& profile = extremal.profile;
  const auto r = profile.grid().nodes();
  double worst = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (r[i] < 1e-4 || r[i] > 0.5) continue;
    const double exact = -2.0 * std::log(r[i]);
    worst = std::max(worst, std::abs(profile.u()[i] - exact) / exact);
  }
  out.require(worst < 0.05, printf_string("extremal vs -2 log r on [1e-4,0.5]: %.3g < 0.05 (%s)",
                                          worst, stop_name(extremal.stop).c_str()));
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome sweep_determinism(const fs::path& scratch) {
  Outcome out;
  std::vector<std::string> indexes;
  for (const char* run : {"sweep-a", "sweep-b"}) {
    const fs::path dir = scratch / run;
    fs::remove_all(dir);
    RunConfig config;
    config.set("sweep.command", "lambda-star");
    config.set("sweep.p", "1.5,2,3,5");
    config.set("grid.N", "400");
    config.set("output.dir", dir.string());
    const auto result = run_command("sweep", config, RunOptions{4, false});
    if (result.exit_code != kExitOk) {
      out.require(false, std::string(run) + " exit " + std::to_string(result.exit_code));
      return out;
    }
    indexes.push_back(slurp(dir / "index.csv"));
  }
  const auto rows = std::count(indexes[0].begin(), indexes[0].end(), '\n') - 1;
  out.require(rows == 4, printf_string("index rows %ld", static_cast<long>(rows)));
  out.require(!indexes[0].empty() && indexes[0] == indexes[1], "index.csv byte-identical");
  return out;
}

}  // namespace

std::string criterion_name(int id) {
  static const char* names[] = {
      "critical-dimensions",  "exponent-identity",     "oracle-residuals",
      "lambda-star-closed",   "lambda-star-liouville", "minimal-branch-stability",
      "stability-threshold",  "identity-g-free",       "hardy-inequality",
      "singularity-exponents", "integrability-thresholds", "uniform-bound",
      "sweep-determinism"};
  if (id < 1 || id > kCriterionCount) throw InvalidArgument("no criterion " + std::to_string(id));
  return names[id - 1];
}

CriterionResult run_criterion(int id, const fs::path& scratch) {
  CriterionResult result;
  result.id = id;
  const auto start = std::chrono::steady_clock::now();
  try {
    result.name = criterion_name(id);
    Outcome outcome;
    switch (id) {
      case 1: outcome = critical_dimensions(); break;
      case 2: outcome = exponent_identity(); break;
      case 3: outcome = oracle_residuals(); break;
      case 4: outcome = lambda_star_closed_form(); break;
      case 5: outcome = lambda_star_liouville(); break;
      case 6: outcome = minimal_branch_stability(); break;
      case 7: outcome = stability_threshold(); break;
      case 8: outcome = identity_check(); break;
      case 9: outcome = hardy_check(); break;
      case 10: outcome = singularity_exponents(); break;
      case 11: outcome = integrability_thresholds(); break;
      case 12: outcome = uniform_bound(); break;
      case 13: outcome = sweep_determinism(scratch); break;
      default: break;
    }
    result.passed = outcome.passed;
    result.detail = outcome.detail;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<int> preset_criteria(std::string_view preset) {
  if (preset == "gelfand-disk") return {1, 5, 6, 8, 9};
  if (preset == "supercritical-exp") return {3, 4, 7, 9, 10, 12};
  if (preset == "power-critical") return {2, 3, 10, 11};
  throw InvalidArgument("unknown verify preset '" + std::string(preset) + "'");
}

}  // namespace plaplab
