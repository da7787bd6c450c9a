#include "plap/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/statistics/linear_regression.hpp>

namespace plap {

namespace {

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

// Index of the node closest to 2 r_min in log r.
std::size_t halving_node(const RadialGrid& grid) {
  const double target = std::log(2.0) / grid.log_step();
  const auto k = static_cast<std::size_t>(std::llround(target));
  return std::clamp<std::size_t>(k, 1, grid.size() - 2);
}

// Node indices with r in [r_a, r_b]; fills log r alongside.
std::vector<std::size_t> window_nodes(const RadialProfile& profile, double r_a, double r_b,
                                      std::vector<double>& log_r) {
  std::vector<std::size_t> picked;
  log_r.clear();
  const auto& grid = profile.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= r_a * (1.0 - 1e-12) && grid[i] <= r_b * (1.0 + 1e-12)) {
      picked.push_back(i);
      log_r.push_back(std::log(grid[i]));
    }
  }
  if (picked.size() < 3) throw InvalidArgument("fit window contains fewer than 3 nodes");
  return picked;
}

double fit_stderr(const std::vector<double>& x, const std::vector<double>& y, double c0, double c1) {
  const std::size_t count = x.size();
  if (count <= 2) return 0.0;
  double mean_x = 0.0;
  for (double v : x) mean_x += v;
  mean_x /= static_cast<double>(count);
  double sse = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double e = y[i] - (c0 + c1 * x[i]);
    sse += e * e;
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
  }
  return std::sqrt(sse / static_cast<double>(count - 2) / sxx);
}

}  // namespace

// ---------------------------------------------------------------- norms

ExtendedReal radial_power_integral(const RadialProfile& profile, std::span<const double> values,
                                   double q) {
  if (!(q >= 1.0)) throw InvalidArgument("norm exponent q must be >= 1");
  const QuadratureRule rule(profile.grid(), profile.n());
  // |v|^q can overflow near a singularity; integrate |v|^q / max |v|^q.
  double log_max = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (v != 0.0) log_max = std::max(log_max, q * std::log(std::abs(v)));
  }
  if (!std::isfinite(log_max)) return ExtendedReal(0.0);
  std::vector<double> h(values.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = values[i] == 0.0 ? 0.0 : std::exp(q * std::log(std::abs(values[i])) - log_max);
  }
  const double full = rule.integrate(h);
  const double trimmed = rule.integrate_from(h, halving_node(profile.grid()));
  if (trimmed > 0.0 && (full - trimmed) / trimmed > kDivergenceGrowth) {
    return ExtendedReal::infinity();
  }
  const double value = full * std::exp(log_max);
  // Passing the halving test with an unrepresentable value does not happen
  // for integrable data; report it as divergent rather than as inf.
  if (!std::isfinite(value)) return ExtendedReal::infinity();
  return ExtendedReal(value);
}

ExtendedReal lq_norm(const RadialProfile& profile, ExtendedReal q) {
  if (q.is_finite()) return lq_norm(profile, q.value());
  const auto u = profile.u();
  double sup = 0.0;
  for (double v : u) sup = std::max(sup, std::abs(v));
  // Still growing over the last decade above r_min: unbounded at the origin.
  const auto& grid = profile.grid();
  const auto decade = static_cast<std::size_t>(std::llround(std::log(10.0) / grid.log_step()));
  if (decade + 1 < grid.size()) {
    const double growth = std::abs(u[0] - u[decade]);
    if (growth > kSupGrowth * std::max(1.0, std::abs(u[0]))) return ExtendedReal::infinity();
  }
  return ExtendedReal(sup);
}

ExtendedReal lq_norm(const RadialProfile& profile, double q) {
  const ExtendedReal integral = radial_power_integral(profile, profile.u(), q);
  if (!integral.is_finite()) return integral;
  return ExtendedReal(std::pow(integral.value(), 1.0 / q));
}

ExtendedReal w1q_norm(const RadialProfile& profile, double q) {
  const ExtendedReal values = radial_power_integral(profile, profile.u(), q);
  const ExtendedReal slopes = radial_power_integral(profile, profile.u_r(), q);
  if (!values.is_finite() || !slopes.is_finite()) return ExtendedReal::infinity();
  return ExtendedReal(std::pow(values.value() + slopes.value(), 1.0 / q));
}

double gradient_lp_norm(const RadialProfile& profile) {
  const QuadratureRule rule(profile.grid(), profile.n());
  const double p = profile.p();
  std::vector<double> h(profile.size());
  const auto u_r = profile.u_r();
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::pow(std::abs(u_r[i]), p);
  return std::pow(rule.integrate(h), 1.0 / p);
}

std::optional<double> integrability_threshold(const RadialProfile& profile, NormKind kind,
                                              double q_lo, double q_hi, double tol) {
  if (!(q_lo >= 1.0 && q_hi > q_lo)) throw InvalidArgument("need 1 <= q_lo < q_hi");
  auto diverges = [&](double q) {
    const ExtendedReal v = kind == NormKind::Lq ? lq_norm(profile, q) : w1q_norm(profile, q);
    return !v.is_finite();
  };
  if (diverges(q_lo)) return q_lo;
  if (!diverges(q_hi)) return std::nullopt;
  double lo = q_lo;
  double hi = q_hi;
  while ((hi - lo) > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (diverges(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- fits

PowerFit singularity_exponent_fit(const RadialProfile& profile, double r_a, double r_b) {
  const auto& grid = profile.grid();
  if (!(r_a >= 10.0 * grid.r_min() * (1.0 - 1e-12) && r_b <= 0.1 * (1.0 + 1e-12))) {
    throw InvalidArgument("fit window must lie inside [10 r_min, 0.1]");
  }
  if (!(r_b >= 10.0 * r_a * (1.0 - 1e-12))) throw InvalidArgument("fit window is narrower than a decade");

  std::vector<double> log_r;
  const auto idx = window_nodes(profile, r_a, r_b, log_r);
  const auto u = profile.u();
  const double u_b = u[idx.back()];
  if (!(u.front() > 10.0 * u_b)) {
    throw PreconditionFailed(format("profile is not singular: u(r_min) = %.6g <= 10 u(r_b) = %.6g",
                                    u.front(), 10.0 * u_b));
  }
  std::vector<double> y;
  y.reserve(idx.size());
  for (std::size_t i : idx) {
    const double radial = -grid[i] * profile.u_r()[i];
    if (!(radial > 0.0)) throw PreconditionFailed("profile is not strictly decreasing in the window");
    y.push_back(std::log(radial));
  }
  const auto [c0, c1] = boost::math::statistics::simple_ordinary_least_squares(log_r, y);
  PowerFit fit;
  fit.slope = c1;
  fit.stderr_ = fit_stderr(log_r, y, c0, c1);
  fit.accepted = std::abs(c1) >= kLogSlopeThreshold;
  if (!fit.accepted) fit.reason = "r|u_r| is flat: logarithmic, not power-law, singularity";
  return fit;
}

LinearFit log_singularity_fit(const RadialProfile& profile, double r_a, double r_b) {
  if (!(r_a > 0.0 && r_b > r_a && r_b < 1.0)) throw InvalidArgument("need 0 < r_a < r_b < 1");
  std::vector<double> log_r;
  const auto idx = window_nodes(profile, r_a, r_b, log_r);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    x.push_back(-log_r[j]);
    y.push_back(profile.u()[idx[j]]);
  }
  const auto [c0, c1] = boost::math::statistics::simple_ordinary_least_squares(x, y);
  return LinearFit{c1, c0, fit_stderr(x, y, c0, c1)};
}

// ---------------------------------------------------------------- regime checks

bool EstimateReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

EstimateReport check_theorem1(const RadialProfile& profile, const ProblemSpec& spec,
                              const StabilityReport& stability, const EstimateOptions& options) {
  if (stability.verdict != Verdict::SemiStable) {
    throw PreconditionFailed("regularity checks need a semi-stable profile; verdict was " +
                             verdict_name(stability.verdict));
  }
  if (profile.n() != spec.n || profile.p() != spec.p) {
    throw RegimeMismatch("profile and problem disagree on n or p");
  }
  const double n = spec.n;
  const double p = spec.p;
  const auto& grid = profile.grid();
  const auto u = profile.u();

  EstimateReport report;
  report.regime = classify(n, p);
  report.non_integer_dimension = !spec.integer_dimension();
  report.sup_norm = lq_norm(profile, ExtendedReal::infinity());
  report.gradient_lp = gradient_lp_norm(profile);
  report.w1p_norm = w1q_norm(profile, p).as_double();
  for (double q : options.lq_exponents) report.lq_norms.emplace_back(q, lq_norm(profile, q));
  for (double q : options.w1q_exponents) report.w1q_norms.emplace_back(q, w1q_norm(profile, q));

  const double fit_lo = options.fit_lo > 0.0 ? options.fit_lo : 10.0 * grid.r_min();
  const double fit_hi = options.fit_hi > 0.0 ? options.fit_hi : 0.1;

  switch (report.regime) {
    case Regime::Bounded: {
      CheckResult c{"bounded", false, 0.0, 0.0, {}};
      c.passed = report.sup_norm.is_finite();
      c.value = report.sup_norm.as_double();
      c.bound = report.w1p_norm > 0.0 ? c.value / report.w1p_norm : 0.0;
      c.detail = "implied constant ||u||_inf / ||u||_W1p in bound";
      report.checks.push_back(c);
      break;
    }
    case Regime::Critical: {
      double ratio = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ratio = std::max(ratio, u[i] / (std::abs(std::log(grid[i])) + 1.0));
      }
      CheckResult c{"log-growth", false, 0.0, 0.0, {}};
      c.value = ratio;
      c.bound = report.w1p_norm > 0.0 ? ratio / report.w1p_norm : 0.0;
      c.passed = std::isfinite(ratio);
      c.detail = "u(r) <= value * (|log r| + 1); bound = implied constant over ||u||_W1p";
      report.checks.push_back(c);
      break;
    }
    case Regime::Supercritical: {
      report.target_growth = pointwise_exponent(n, p);
      double growth = 0.0;
      std::string how = "profile not singular on the window: growth 0";
      try {
        const PowerFit fit = singularity_exponent_fit(profile, fit_lo, fit_hi);
        if (fit.accepted) {
          growth = -fit.slope;
          how = "power-law fit";
        } else {
          how = "logarithmic singularity: growth 0";
        }
      } catch (const PreconditionFailed&) {
      }
      report.fitted_growth = growth;
      CheckResult c{"pointwise-growth", false, 0.0, 0.0, {}};
      c.value = growth;
      c.bound = report.target_growth + options.slope_tolerance;
      c.passed = growth <= c.bound;
      c.detail = how;
      report.checks.push_back(c);

      const double q0 = q_exponent(n, p, 0).value();
      const ExtendedReal norm = lq_norm(profile, 0.95 * q0);
      CheckResult lq{"lq-below-q0", false, 0.0, 0.0, {}};
      lq.value = norm.as_double();
      lq.bound = 0.95 * q0;
      lq.passed = norm.is_finite();
      lq.detail = "||u||_{L^q} at q = 0.95 q0 finite";
      report.checks.push_back(lq);
      break;
    }
  }

  // Gradient growth on B_{1/4}, only meaningful for g >= 0.
  bool nonnegative = true;
  for (double v : u) nonnegative = nonnegative && spec.nonlinearity.g(v) >= 0.0;
  if (nonnegative && report.regime != Regime::Bounded) {
    const double hi = options.fit_hi > 0.0 ? std::min(options.fit_hi, 0.25) : 0.25;
    std::vector<double> log_r;
    const auto idx = window_nodes(profile, fit_lo, hi, log_r);
    std::vector<double> y;
    for (std::size_t i : idx) {
      y.push_back(std::log(std::max(std::abs(profile.u_r()[i]), 1e-300)));
    }
    const auto [c0, c1] = boost::math::statistics::simple_ordinary_least_squares(log_r, y);
    CheckResult c{"gradient-growth", false, 0.0, 0.0, {}};
    c.value = -c1;
    c.bound = gradient_exponent(n, p) + options.slope_tolerance;
    c.passed = c.value <= c.bound;
    c.detail = "growth exponent of |u_r| on [fit_lo, 1/4]";
    report.checks.push_back(c);
  }
  return report;
}

GradientBound gradient_L1_bound(const RadialProfile& profile, const Nonlinearity& g) {
  const QuadratureRule rule(profile.grid(), profile.n());
  const double p = profile.p();
  const auto u = profile.u();
  const double boundary = u.back();
  std::vector<double> level(u.size());
  std::vector<double> source(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    source[i] = g.g(u[i]);
    if (source[i] < 0.0) throw InvalidArgument("gradient bound needs g >= 0 on the range of u");
    level[i] = std::pow(std::max(u[i] - boundary, 0.0), p - 1.0);
  }
  GradientBound out;
  out.lhs = gradient_lp_norm(profile);
  out.level_term = std::pow(rule.integrate(level), 1.0 / (p - 1.0));
  out.source_term = std::pow(rule.integrate(source), 1.0 / (p - 1.0));
  const double rhs = out.level_term + out.source_term;
  out.implied_constant = rhs > 0.0 ? out.lhs / rhs : 0.0;
  return out;
}

FluxMonotonicity flux_monotonicity_check(const RadialProfile& profile, double slack) {
  FluxMonotonicity out;
  out.location = std::numeric_limits<double>::quiet_NaN();
  const auto w = profile.w();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    // -w[i+1] >= -w[i]  <=>  w[i] - w[i+1] >= 0
    const double drop = w[i + 1] - w[i];
    if (drop > out.max_violation) {
      out.max_violation = drop;
      out.location = profile.grid()[i];
    }
  }
  out.monotone = out.max_violation <= slack;
  return out;
}

UniformBound uniform_bound_check(const ContinuationResult& result, double tolerance) {
  UniformBound out;
  out.quantity = "||u||_W1p + ||f(u)||_L1";
  std::vector<std::pair<double, double>> series;
  for (const auto& record : result.records) {
    if (record.converged) series.emplace_back(record.lambda, record.w1p_norm + record.f_l1_norm);
  }
  if (series.empty()) return out;
  out.monotone = true;
  for (std::size_t i = 1; i < series.size(); ++i) {
    out.monotone = out.monotone && series[i].second >= series[i - 1].second;
  }
  out.final_value = series.back().second;
  out.extrapolated = out.final_value;

  if (series.size() >= 3) {
    const double top = result.lambda_star_estimate;
    const auto& a = series[series.size() - 3];
    const auto& b = series[series.size() - 2];
    const auto& c = series[series.size() - 1];
    const double x1 = top - a.first;
    const double x2 = top - b.first;
    const double x3 = top - c.first;
    const double d12 = b.second - a.second;
    const double d23 = c.second - b.second;
    if (x1 > x2 && x2 > x3 && x3 > 0.0 && d12 > 0.0 && d23 > 0.0) {
      const double target = d12 / d23;
      auto ratio = [&](double gamma) {
        return (std::pow(x1, gamma) - std::pow(x2, gamma)) /
               (std::pow(x2, gamma) - std::pow(x3, gamma));
      };
      double lo = 1e-6;
      double hi = 20.0;
      if ((ratio(lo) - target) * (ratio(hi) - target) < 0.0) {
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          ((ratio(lo) - target) * (ratio(mid) - target) <= 0.0 ? hi : lo) = mid;
        }
        const double gamma = 0.5 * (lo + hi);
        const double scale = d23 / (std::pow(x2, gamma) - std::pow(x3, gamma));
        out.extrapolated = c.second + scale * std::pow(x3, gamma);
        out.extrapolation_ok = std::isfinite(out.extrapolated);
      }
    } else if (d23 == 0.0 && d12 >= 0.0) {
      out.extrapolation_ok = true;
    }
  }
  out.ratio = out.extrapolated > 0.0 ? out.final_value / out.extrapolated : 0.0;
  out.passed = out.monotone && out.extrapolation_ok && out.ratio <= 1.0 + tolerance;
  return out;
}

}  // namespace plap
