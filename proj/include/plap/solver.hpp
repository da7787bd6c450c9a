#pragma once

// Radial solvers for -Delta_p u = g(u), u(1) = 0:
//  - shoot: integrate the flux system outward from a centre value M,
//  - minimal_iterate: monotone iteration from u = 0,
//  - lambda_star_estimate: bracket the extremal parameter by bisection,
//  - bifurcation_curve: lambda as a function of the centre value,
//  - extremal_profile: approximation of the increasing limit of minimal
//    solutions at the top of the bracket.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plap/core.hpp"

namespace plap {

// ---------------------------------------------------------------- shooting

struct ShootOptions {
  /// Series start is moved below r_min until its leading correction is
  /// below this fraction of max(1, |M|).
  double series_tolerance = 1e-10;
  /// |u| above this aborts with BlowUp.
  double overflow_guard = 1e12;
};

struct ShootResult {
  /// Raw values with u(0) = M (not shifted to u(1) = 0).
  std::vector<double> u;
  std::vector<double> w;
  /// Present when the raw fields satisfy the profile invariants
  /// (always the case for g >= 0).
  std::optional<RadialProfile> profile;
  double center = 0.0;
  double boundary_value = 0.0;
  /// Radius where the startup series was evaluated (<= r_min).
  double series_radius = 0.0;
  std::size_t steps = 0;
  double min_step = 0.0;
  std::vector<std::string> warnings;
};

/// RK4 in s = log r on the variables (u, z) with z = -w / r^n, so that
///   du/ds = -z^{1/(p-1)} r^{p/(p-1)},  dz/ds = g(u) - n z.
/// Seeded by u = M - (p-1)/p (g(M)/n)^{1/(p-1)} r^{p/(p-1)}, z = g(M)/n.
ShootResult shoot(const ProblemSpec& spec, double center, const RadialGrid& grid,
                  const ShootOptions& options = {});

// ------------------------------------------------------- monotone iteration

struct IterationControls {
  double tol_abs = 1e-12;
  double tol_rel = 1e-12;
  double u_max = 1e6;
  std::size_t k_max = 10000;
  /// Allowed decrease between iterates, relative to max(1, |u|).
  double monotone_slack = 1e-12;
};

struct MinimalSolution {
  RadialProfile profile;
  std::size_t iterations = 0;
  double center_value = 0.0;
};

struct Divergence {
  std::size_t iterations = 0;
  double last_sup = 0.0;
  std::string reason;
};

using IterationOutcome = std::variant<MinimalSolution, Divergence>;

/// u^k(r) = int_r^1 ( s^{1-n} int_0^s t^{n-1} g(u^{k-1}) dt )^{1/(p-1)} ds from
/// u^0 = 0, or from `start` when given. `start` must be a subsolution (e.g.
/// the minimal solution at a smaller lambda); the limit is still minimal.
/// Throws InternalError if an iterate decreases anywhere.
IterationOutcome minimal_iterate(const ProblemSpec& spec, const RadialGrid& grid,
                                 const IterationControls& controls = {},
                                 const RadialProfile* start = nullptr);

// ------------------------------------------------------ lambda* bracketing

struct LambdaRecord {
  double lambda = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Only meaningful for converged records.
  double sup_norm = 0.0;
  double w1p_norm = 0.0;
  double f_l1_norm = 0.0;
  std::string reason;
};

struct LambdaControls {
  double lambda_start = 1.0;
  double lambda_cap = 1e8;
  double lambda_floor = 1e-12;
  double tol_lambda = 1e-3;
  IterationControls iteration;
};

struct ContinuationResult {
  ProblemSpec spec;
  RadialGrid grid;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  /// Midpoint of the bracket; the bracket is the actual result.
  double lambda_star_estimate = 0.0;
  /// Sorted by lambda.
  std::vector<LambdaRecord> records;
  /// Minimal solution at lambda_lo.
  std::optional<RadialProfile> lower_profile;
};

/// Doubling/halving from lambda_start, then bisection until
/// (hi - lo) / hi < tol_lambda. Throws NoDivergence when every lambda up to
/// the cap converges (or the table range is left before divergence).
ContinuationResult lambda_star_estimate(const ProblemSpec& spec, const RadialGrid& grid,
                                        const LambdaControls& controls = {});

/// W^{1,p} norm (int |u|^p + int |u_r|^p)^{1/p} in radial units.
double w1p_norm(const RadialProfile& profile, const QuadratureRule& rule);

// ----------------------------------------------------- bifurcation diagram

struct BoundaryControls {
  double tol = 1e-8;  // |u(1)| < tol * M
  std::size_t max_iterations = 60;
  ShootOptions shoot;
};

struct BranchPoint {
  double center = 0.0;
  double lambda = 0.0;
  double boundary_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string message;
};

/// Safeguarded secant (Illinois) on lambda for a fixed centre value, with
/// bisection when a trial blows up. `guess` <= 0 uses a scaling estimate.
BranchPoint solve_branch_point(const ProblemSpec& spec, double center, const RadialGrid& grid,
                               const BoundaryControls& controls = {}, double guess = 0.0);

/// One branch point per centre value; failures are recorded, not thrown.
std::vector<BranchPoint> bifurcation_curve(const ProblemSpec& spec,
                                           const std::vector<double>& centers,
                                           const RadialGrid& grid,
                                           const BoundaryControls& controls = {});

// --------------------------------------------------------- extremal profile

struct ExtremalControls {
  /// Centre step: max(min_step, relative_step * M).
  double min_step = 0.25;
  double relative_step = 0.1;
  std::size_t max_steps = 2000;
  /// Relative drop in lambda that counts as passing a fold.
  double fold_tolerance = 1e-9;
  BoundaryControls boundary{1e-12, 100, {}};
};

struct ExtremalProfile {
  enum class Stop { Fold, Singular, StepCap };
  RadialProfile profile;
  double lambda = 0.0;
  double center = 0.0;
  Stop stop = Stop::StepCap;
  std::size_t steps = 0;
};

std::string stop_name(ExtremalProfile::Stop stop);

/// Starts at the minimal solution at lambda_lo and follows the branch in the
/// centre value until lambda stops increasing (a fold, located by golden
/// section) or until the core of the solution drops below r_min, where the
/// grid can no longer tell the profile from the singular limit.
ExtremalProfile extremal_profile(const ContinuationResult& result,
                                 const ExtremalControls& controls = {});

}  // namespace plap
