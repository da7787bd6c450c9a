#pragma once

// Norms of radial profiles and the regularity checks for semi-stable
// solutions: boundedness, logarithmic or power-law growth at the origin,
// integrability thresholds and the gradient bound.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plap/core.hpp"
#include "plap/exponents.hpp"
#include "plap/solver.hpp"
#include "plap/stability.hpp"

namespace plap {

/// Relative growth of an integral when its lower limit moves from the node
/// nearest 2 r_min down to r_min; above this the integral is flagged +inf.
inline constexpr double kDivergenceGrowth = 0.05;
/// Relative growth of u over the last decade above r_min that flags an
/// unbounded sup norm.
inline constexpr double kSupGrowth = 1e-6;

/// (int |u|^q r^{n-1} dr)^{1/q}, or max |u| for q = +inf (pass infinity()).
ExtendedReal lq_norm(const RadialProfile& profile, ExtendedReal q);
ExtendedReal lq_norm(const RadialProfile& profile, double q);
/// (||u||_q^q + ||u_r||_q^q)^{1/q}; +inf if either term diverges.
ExtendedReal w1q_norm(const RadialProfile& profile, double q);
/// (int |u_r|^p)^{1/p}.
double gradient_lp_norm(const RadialProfile& profile);

/// Weighted integral of |values|^q with the halving divergence test.
ExtendedReal radial_power_integral(const RadialProfile& profile, std::span<const double> values,
                                   double q);

enum class NormKind { Lq, W1q };

/// Smallest q in [q_lo, q_hi] at which the norm is flagged divergent,
/// located by bisection to a relative width `tol`. nullopt if the norm is
/// finite on the whole range.
std::optional<double> integrability_threshold(const RadialProfile& profile, NormKind kind,
                                              double q_lo, double q_hi, double tol = 1e-4);

struct PowerFit {
  /// d log(-r u_r) / d log r, i.e. minus the growth exponent of u.
  double slope = 0.0;
  double stderr_ = 0.0;
  /// False when |slope| is below the log threshold: the singularity is
  /// logarithmic, not a power.
  bool accepted = false;
  std::string reason;
};

inline constexpr double kLogSlopeThreshold = 0.02;

/// Least-squares slope of log(-r u_r) against log r over nodes in
/// [r_a, r_b]. Exact for u = A r^{-beta} + C. Requires a singular profile
/// (u(r_min) > 10 u(r_b)), a window inside [10 r_min, 0.1] and at least one
/// decade.
PowerFit singularity_exponent_fit(const RadialProfile& profile, double r_a, double r_b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
};

/// Least-squares slope of u against |log r| over nodes in [r_a, r_b].
LinearFit log_singularity_fit(const RadialProfile& profile, double r_a, double r_b);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct EstimateReport {
  Regime regime = Regime::Bounded;
  bool non_integer_dimension = false;
  ExtendedReal sup_norm;
  double w1p_norm = 0.0;
  double gradient_lp = 0.0;
  std::vector<std::pair<double, ExtendedReal>> lq_norms;
  std::vector<std::pair<double, ExtendedReal>> w1q_norms;
  std::optional<double> fitted_growth;
  double target_growth = 0.0;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const;
};

struct EstimateOptions {
  std::vector<double> lq_exponents{2.0};
  std::vector<double> w1q_exponents{};
  /// Slack on growth-exponent comparisons (absorbs |log r|^{1/p}).
  double slope_tolerance = 0.05;
  /// Fit window for growth exponents; 0 means [10 r_min, 0.1] (gradient:
  /// [10 r_min, 0.25]).
  double fit_lo = 0.0;
  double fit_hi = 0.0;
};

/// Regime-dependent checks on a semi-stable profile (normalized to u(1) = 0).
/// Refuses with PreconditionFailed unless `stability` says semi-stable.
EstimateReport check_theorem1(const RadialProfile& profile, const ProblemSpec& spec,
                              const StabilityReport& stability,
                              const EstimateOptions& options = {});

struct GradientBound {
  double lhs = 0.0;
  double level_term = 0.0;
  double source_term = 0.0;
  double implied_constant = 0.0;
};

/// ||u_r||_p against ||(u-u(1))^{p-1}||_1^{1/(p-1)} + ||g(u)||_1^{1/(p-1)}.
/// Requires g >= 0 at every node.
GradientBound gradient_L1_bound(const RadialProfile& profile, const Nonlinearity& g);

struct FluxMonotonicity {
  bool monotone = true;
  double max_violation = 0.0;
  /// Radius where the largest decrease of -w starts (NaN if none).
  double location = 0.0;
};

/// -w nondecreasing along the nodes within `slack` (absolute).
FluxMonotonicity flux_monotonicity_check(const RadialProfile& profile, double slack = 1e-10);

struct UniformBound {
  std::string quantity;
  bool monotone = false;
  double final_value = 0.0;
  double extrapolated = 0.0;
  double ratio = 0.0;
  bool extrapolation_ok = false;
  bool passed = false;
};

/// Along the converged records of a lambda search, T = ||u||_{W^{1,p}} +
/// ||f(u)||_1 must be nondecreasing and have a finite limit at the top of
/// the bracket. The limit comes from fitting T = T* - C (lambda* - lambda)^gamma
/// to the last three records; passes when final / T* <= 1 + tolerance.
UniformBound uniform_bound_check(const ContinuationResult& result, double tolerance = 0.05);

}  // namespace plap
