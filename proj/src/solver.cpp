#include "plap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "plap/kernels.hpp"

namespace plap {

namespace {

double signed_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  const double magnitude = std::pow(std::abs(x), e);
  return x < 0.0 ? -magnitude : magnitude;
}

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

struct FluxState {
  double u;
  double z;
};

class FluxSystem {
 public:
  FluxSystem(const ProblemSpec& spec)
      : g_(spec.nonlinearity), n_(spec.n), inv_(1.0 / (spec.p - 1.0)), q_(spec.p / (spec.p - 1.0)) {}

  [[nodiscard]] FluxState rhs(double s, FluxState y) const {
    return {-signed_pow(y.z, inv_) * std::exp(q_ * s), g_.g(y.u) - n_ * y.z};
  }

  [[nodiscard]] FluxState rk4(double s, FluxState y, double h) const {
    const FluxState k1 = rhs(s, y);
    const FluxState k2 = rhs(s + 0.5 * h, {y.u + 0.5 * h * k1.u, y.z + 0.5 * h * k1.z});
    const FluxState k3 = rhs(s + 0.5 * h, {y.u + 0.5 * h * k2.u, y.z + 0.5 * h * k2.z});
    const FluxState k4 = rhs(s + h, {y.u + h * k3.u, y.z + h * k3.z});
    return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            y.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
  }

 private:
  const Nonlinearity& g_;
  double n_;
  double inv_;
  double q_;
};

void guard(FluxState y, double limit, double r) {
  if (!std::isfinite(y.u) || !std::isfinite(y.z) || std::abs(y.u) > limit) {
    throw BlowUp(format("shooting solution blew up near r = %.6g (limit %.3g)", r, limit));
  }
}

}  // namespace

// ---------------------------------------------------------------- shooting

ShootResult shoot(const ProblemSpec& spec, double center, const RadialGrid& grid,
                  const ShootOptions& options) {
  spec.validate();
  if (!std::isfinite(center)) throw InvalidArgument("centre value must be finite");
  const double n = spec.n;
  const double p = spec.p;
  const double q = p / (p - 1.0);
  const FluxSystem system(spec);

  const double g_center = spec.nonlinearity.g(center);
  const double series_coeff = (p - 1.0) / p * signed_pow(g_center / n, 1.0 / (p - 1.0));
  const double tolerance = options.series_tolerance * std::max(1.0, std::abs(center));

  const double s_min = std::log(grid.r_min());
  double s_start = s_min;
  if (std::abs(series_coeff) * std::exp(q * s_min) > tolerance) {
    s_start = std::log(tolerance / std::abs(series_coeff)) / q;
  }

  ShootResult result;
  result.center = center;
  result.series_radius = std::exp(s_start);
  result.min_step = std::numeric_limits<double>::infinity();

  FluxState y{center - series_coeff * std::exp(q * s_start), g_center / n};

  // The z equation has decay rate n; keep n * step below 1/2.
  const double h = grid.log_step();
  const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(h * n / 0.5)));
  const double max_step = h / static_cast<double>(substeps);

  auto advance = [&](double s_from, double s_to, std::size_t count) {
    const double step = (s_to - s_from) / static_cast<double>(count);
    for (std::size_t j = 0; j < count; ++j) {
      const double s = s_from + step * static_cast<double>(j);
      y = system.rk4(s, y, step);
      guard(y, options.overflow_guard, std::exp(s + step));
    }
    result.steps += count;
    result.min_step = std::min(result.min_step, step);
  };

  if (s_start < s_min) {
    const auto count = static_cast<std::size_t>(std::ceil((s_min - s_start) / max_step));
    advance(s_start, s_min, std::max<std::size_t>(count, 1));
  }

  const std::size_t count = grid.size();
  result.u.resize(count);
  result.w.resize(count);
  double s = s_min;
  for (std::size_t i = 0; i < count; ++i) {
    const double s_node = std::log(grid[i]);
    if (i > 0) advance(s, s_node, substeps);
    s = s_node;
    result.u[i] = y.u;
    result.w[i] = -y.z * std::exp(n * s_node);
  }
  result.boundary_value = result.u.back();

  try {
    result.profile = RadialProfile::from_flux(grid, n, p, result.u, result.w);
  } catch (const InvalidArgument& e) {
    result.warnings.emplace_back(std::string("raw solution is not a decreasing profile: ") +
                                 e.what());
  }
  return result;
}

// ------------------------------------------------------- monotone iteration

IterationOutcome minimal_iterate(const ProblemSpec& spec, const RadialGrid& grid,
                                 const IterationControls& controls, const RadialProfile* start) {
  spec.validate();
  const Nonlinearity& g = spec.nonlinearity;
  const double n = spec.n;
  const double p = spec.p;
  if (g.g(0.0) < 0.0) throw InvalidArgument("monotone iteration needs g(0) >= 0");
  const std::size_t count = grid.size();

  const IntervalRule inner(grid, n - 1.0);
  const IntervalRule outer(grid, 0.0);
  const double head = std::pow(grid.r_min(), n) / n;

  std::vector<double> u_prev(count, 0.0);
  if (start != nullptr) {
    if (start->size() != count || start->n() != n || start->p() != p) {
      throw InvalidArgument("warm start profile does not match the problem or grid");
    }
    std::copy(start->u().begin(), start->u().end(), u_prev.begin());
  }

  std::vector<double> g_values(count);
  std::vector<double> flux(count);
  std::vector<double> speed(count);
  std::vector<double> u_next(count);
  const auto evaluate = [&g](double t) { return g.g(t); };

  for (std::size_t k = 1; k <= controls.k_max; ++k) {
    kernels::transform(u_prev, g_values, evaluate);
    for (double v : g_values) {
      if (!std::isfinite(v)) return Divergence{k, u_prev.front(), "source became non-finite"};
      if (v < 0.0) throw InvalidArgument("monotone iteration needs g >= 0 along the iterates");
    }

    // flux[i] = -int_0^{r_i} t^{n-1} g dt
    double cumulative = g_values.front() * head;
    flux[0] = -cumulative;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      cumulative += inner.apply(i, g_values);
      flux[i + 1] = -cumulative;
    }
    for (std::size_t i = 0; i < count; ++i) speed[i] = -slope_from_flux(flux[i], grid[i], n, p);

    u_next[count - 1] = 0.0;
    for (std::size_t i = count - 1; i-- > 0;) u_next[i] = u_next[i + 1] + outer.apply(i, speed);

    const double sup = u_next.front();
    if (!std::isfinite(sup)) return Divergence{k, u_prev.front(), "iterate became non-finite"};

    double change = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double slack = controls.monotone_slack * std::max(1.0, std::abs(u_prev[i]));
      if (u_next[i] < u_prev[i] - slack) {
        throw InternalError(
            format("monotone iteration decreased at r = %.6g by %.3g", grid[i], u_prev[i] - u_next[i]));
      }
      change = std::max(change, std::abs(u_next[i] - u_prev[i]));
    }
    if (sup > controls.u_max) return Divergence{k, sup, "sup norm exceeded u_max"};

    std::swap(u_prev, u_next);
    if (change < controls.tol_abs + controls.tol_rel * sup) {
      auto profile = RadialProfile::from_flux(grid, n, p, u_prev, flux);
      const double center = profile.center_value();
      return MinimalSolution{std::move(profile), k, center};
    }
  }
  return Divergence{controls.k_max, u_prev.front(), "iteration cap reached"};
}

// ------------------------------------------------------ lambda* bracketing

double w1p_norm(const RadialProfile& profile, const QuadratureRule& rule) {
  const double p = profile.p();
  std::vector<double> h(profile.size());
  const auto u = profile.u();
  const auto u_r = profile.u_r();
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = std::pow(std::abs(u[i]), p) + std::pow(std::abs(u_r[i]), p);
  }
  return std::pow(rule.integrate(h), 1.0 / p);
}

ContinuationResult lambda_star_estimate(const ProblemSpec& spec, const RadialGrid& grid,
                                        const LambdaControls& controls) {
  spec.validate();
  if (!(controls.lambda_start > 0.0) || !(controls.tol_lambda > 0.0)) {
    throw InvalidArgument("lambda_start and tol_lambda must be positive");
  }
  if (!(spec.nonlinearity.with_lambda(1.0).f(0.0) > 0.0)) {
    throw InvalidArgument("lambda* search needs f(0) > 0");
  }
  const QuadratureRule rule(grid, spec.n);

  ContinuationResult result{spec, grid, 0.0, 0.0, 0.0, {}, std::nullopt};
  std::optional<RadialProfile> lower;
  bool have_lo = false;
  bool have_hi = false;

  auto attempt = [&](double lambda) -> bool {
    const ProblemSpec trial = spec.with_lambda(lambda);
    IterationOutcome outcome = [&] {
      try {
        return minimal_iterate(trial, grid, controls.iteration, lower ? &*lower : nullptr);
      } catch (const EvaluationError& e) {
        throw NoDivergence(format("no divergence before leaving the nonlinearity's range "
                                  "(lambda = %.6g): ",
                                  lambda) +
                           e.what());
      }
    }();
    LambdaRecord record;
    record.lambda = lambda;
    if (auto* solution = std::get_if<MinimalSolution>(&outcome)) {
      record.iterations = solution->iterations;
      record.converged = true;
      record.sup_norm = solution->profile.u().front();
      record.w1p_norm = w1p_norm(solution->profile, rule);
      std::vector<double> f_values(solution->profile.size());
      const Nonlinearity unit = spec.nonlinearity.with_lambda(1.0);
      kernels::transform(solution->profile.u(), f_values, [&unit](double t) { return unit.f(t); });
      record.f_l1_norm = rule.integrate(f_values);
      lower = std::move(solution->profile);
      result.lambda_lo = lambda;
      have_lo = true;
    } else {
      const auto& divergence = std::get<Divergence>(outcome);
      record.iterations = divergence.iterations;
      record.sup_norm = divergence.last_sup;
      record.reason = divergence.reason;
      result.lambda_hi = lambda;
      have_hi = true;
    }
    result.records.push_back(record);
    return record.converged;
  };

  double lambda = controls.lambda_start;
  if (attempt(lambda)) {
    while (!have_hi) {
      lambda *= 2.0;
      if (lambda > controls.lambda_cap) {
        throw NoDivergence(format("minimal iteration converged for every lambda up to %.6g; "
                                  "f looks sublinear on the explored range",
                                  controls.lambda_cap));
      }
      attempt(lambda);
    }
  } else {
    while (!have_lo) {
      lambda *= 0.5;
      if (lambda < controls.lambda_floor) {
        throw PreconditionFailed(
            format("minimal iteration diverged for every lambda down to %.3g", controls.lambda_floor));
      }
      attempt(lambda);
    }
  }

  while ((result.lambda_hi - result.lambda_lo) / result.lambda_hi >= controls.tol_lambda) {
    attempt(0.5 * (result.lambda_lo + result.lambda_hi));
  }

  result.lambda_star_estimate = 0.5 * (result.lambda_lo + result.lambda_hi);
  result.lower_profile = std::move(lower);
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const LambdaRecord& a, const LambdaRecord& b) { return a.lambda < b.lambda; });
  return result;
}

// ----------------------------------------------------- bifurcation diagram

BranchPoint solve_branch_point(const ProblemSpec& spec, double center, const RadialGrid& grid,
                               const BoundaryControls& controls, double guess) {
  spec.validate();
  BranchPoint point;
  point.center = center;
  if (!(center > 0.0)) {
    point.message = "centre value must be positive";
    return point;
  }
  const double p = spec.p;
  const double target = controls.tol * center;

  auto boundary = [&](double lambda) -> std::optional<double> {
    ++point.iterations;
    try {
      return shoot(spec.with_lambda(lambda), center, grid, controls.shoot).boundary_value;
    } catch (const BlowUp&) {
      return std::nullopt;
    }
  };

  if (!(guess > 0.0)) {
    const double f_half = spec.nonlinearity.with_lambda(1.0).f(0.5 * center);
    guess = spec.n * std::pow(center * p / (p - 1.0), p - 1.0) / std::max(f_half, 1e-300);
  }

  // Bracket: lo has u(1) > 0 (lambda = 0 gives u(1) = M), hi has u(1) < 0 or blows up.
  double lo = 0.0;
  double value_lo = center;
  double hi = guess;
  std::optional<double> value_hi = boundary(hi);
  std::size_t expansions = 0;
  while (value_hi && *value_hi > 0.0) {
    if (std::abs(*value_hi) < target) {
      point.lambda = hi;
      point.boundary_value = *value_hi;
      point.converged = true;
      return point;
    }
    lo = hi;
    value_lo = *value_hi;
    hi *= 2.0;
    if (++expansions > 200 || !std::isfinite(hi)) {
      point.message = "could not bracket a boundary zero in lambda";
      return point;
    }
    value_hi = boundary(hi);
  }

  int stale_side = 0;  // Illinois: +1 if lo was kept last time, -1 if hi
  for (std::size_t it = 0; it < controls.max_iterations; ++it) {
    double trial;
    if (value_hi) {
      trial = hi - *value_hi * (hi - lo) / (*value_hi - value_lo);
      if (!(trial > lo && trial < hi)) trial = 0.5 * (lo + hi);
    } else {
      trial = 0.5 * (lo + hi);
    }
    const std::optional<double> value = boundary(trial);
    if (value && std::abs(*value) < target) {
      point.lambda = trial;
      point.boundary_value = *value;
      point.converged = true;
      return point;
    }
    if (!value || *value < 0.0) {
      hi = trial;
      value_hi = value;
      if (stale_side == 1) value_lo *= 0.5;
      stale_side = 1;
    } else {
      lo = trial;
      value_lo = *value;
      if (stale_side == -1 && value_hi) *value_hi *= 0.5;
      stale_side = -1;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  point.lambda = 0.5 * (lo + hi);
  point.boundary_value = value_lo;
  point.message = format("boundary match did not converge (|u(1)| = %.3g, target %.3g)",
                         std::abs(value_lo), target);
  return point;
}

std::vector<BranchPoint> bifurcation_curve(const ProblemSpec& spec,
                                           const std::vector<double>& centers,
                                           const RadialGrid& grid,
                                           const BoundaryControls& controls) {
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!(centers[i] > 0.0) || (i > 0 && !(centers[i] > centers[i - 1]))) {
      throw InvalidArgument("centre values must be positive and increasing");
    }
  }
  std::vector<BranchPoint> curve;
  curve.reserve(centers.size());
  double guess = 0.0;
  for (double center : centers) {
    curve.push_back(solve_branch_point(spec, center, grid, controls, guess));
    if (curve.back().converged) guess = curve.back().lambda;
  }
  return curve;
}

// --------------------------------------------------------- extremal profile

std::string stop_name(ExtremalProfile::Stop stop) {
  switch (stop) {
    case ExtremalProfile::Stop::Fold:
      return "fold";
    case ExtremalProfile::Stop::Singular:
      return "singular";
    case ExtremalProfile::Stop::StepCap:
      return "step-cap";
  }
  return "?";
}

namespace {

// Radius at which the startup series has dropped by max(1, M/2): once this
// is below r_min the grid sees only the singular tail.
bool core_below_grid(const ProblemSpec& spec, double lambda, double center, double r_min) {
  const double p = spec.p;
  const double g = spec.nonlinearity.with_lambda(lambda).g(center);
  if (!(g > 0.0)) return false;
  const double coeff = (p - 1.0) / p * std::pow(g / spec.n, 1.0 / (p - 1.0));
  const double drop = std::max(1.0, 0.5 * std::abs(center));
  return std::pow(drop / coeff, (p - 1.0) / p) < r_min;
}

}  // namespace

ExtremalProfile extremal_profile(const ContinuationResult& result,
                                 const ExtremalControls& controls) {
  if (!result.lower_profile) {
    throw InvalidArgument("continuation result has no convergent lambda");
  }
  const ProblemSpec& spec = result.spec;
  const RadialGrid& grid = result.grid;

  auto solve = [&](double center, double guess) {
    BranchPoint point = solve_branch_point(spec, center, grid, controls.boundary, guess);
    if (!point.converged) {
      throw MathOutcome(format("branch continuation failed at centre %.6g: ", center) + point.message);
    }
    return point;
  };

  BranchPoint previous = solve(result.lower_profile->center_value(), result.lambda_lo);
  std::optional<BranchPoint> before_previous;
  ExtremalProfile::Stop stop = ExtremalProfile::Stop::StepCap;
  BranchPoint chosen = previous;
  std::size_t steps = 0;

  for (; steps < controls.max_steps; ++steps) {
    const double step = std::max(controls.min_step, controls.relative_step * std::abs(previous.center));
    const BranchPoint next = solve(previous.center + step, previous.lambda);

    if (next.lambda < previous.lambda * (1.0 - controls.fold_tolerance)) {
      // Maximize lambda(M) on [a, b] by golden section.
      double a = before_previous ? before_previous->center : std::max(0.5 * previous.center,
                                                                      previous.center - step);
      double b = next.center;
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - ratio * (b - a);
      double x2 = a + ratio * (b - a);
      BranchPoint p1 = solve(x1, previous.lambda);
      BranchPoint p2 = solve(x2, previous.lambda);
      while (b - a > 1e-10 * b) {
        if (p1.lambda > p2.lambda) {
          b = x2;
          x2 = x1;
          p2 = p1;
          x1 = b - ratio * (b - a);
          p1 = solve(x1, p2.lambda);
        } else {
          a = x1;
          x1 = x2;
          p1 = p2;
          x2 = a + ratio * (b - a);
          p2 = solve(x2, p1.lambda);
        }
      }
      chosen = p1.lambda > p2.lambda ? p1 : p2;
      stop = ExtremalProfile::Stop::Fold;
      break;
    }
    before_previous = previous;
    previous = next;
    chosen = next;
    if (core_below_grid(spec, next.lambda, next.center, grid.r_min())) {
      stop = ExtremalProfile::Stop::Singular;
      break;
    }
  }

  const ShootResult shot = shoot(spec.with_lambda(chosen.lambda), chosen.center, grid,
                                 controls.boundary.shoot);
  if (!shot.profile) throw InternalError("extremal branch point is not a decreasing profile");
  return ExtremalProfile{shot.profile->normalized(), chosen.lambda, chosen.center, stop, steps};
}

}  // namespace plap
