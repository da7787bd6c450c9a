#include "plap/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "gauss.hpp"
#include "plap/kernels.hpp"
#include "plap/oracle.hpp"

namespace plap {

// ---------------------------------------------------------------- test functions

TestFunction TestFunction::power_cutoff(double alpha, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("power cutoff needs 0 < eps < 1");
  if (!std::isfinite(alpha)) throw InvalidArgument("power cutoff exponent must be finite");
  TestFunction f;
  f.kind_ = Kind::PowerCutoff;
  f.a_ = alpha;
  f.b_ = eps;
  return f;
}

TestFunction TestFunction::sine_mode(int j, double r_trunc) {
  if (j < 1) throw InvalidArgument("sine mode index must be >= 1");
  if (!(r_trunc > 0.0 && r_trunc < 1.0)) throw InvalidArgument("sine mode needs 0 < r_trunc < 1");
  TestFunction f;
  f.kind_ = Kind::SineMode;
  f.j_ = j;
  f.a_ = r_trunc;
  f.b_ = std::log(r_trunc);
  return f;
}

TestFunction TestFunction::hat(double left, double peak, double right) {
  if (!(left > 0.0 && left < peak && peak < right && right <= 1.0)) {
    throw InvalidArgument("hat needs 0 < left < peak < right <= 1");
  }
  TestFunction f;
  f.kind_ = Kind::Hat;
  f.a_ = left;
  f.b_ = peak;
  f.c_ = right;
  return f;
}

TestFunction TestFunction::zero() { return TestFunction{}; }

TestFunction TestFunction::r_scaled() const {
  TestFunction f;
  f.kind_ = Kind::RScaled;
  f.inner_ = std::make_shared<const TestFunction>(*this);
  return f;
}

std::string TestFunction::describe() const {
  char buf[128];
  switch (kind_) {
    case Kind::PowerCutoff:
      std::snprintf(buf, sizeof buf, "power-cutoff(alpha=%.6g, eps=%.3g)", a_, b_);
      return buf;
    case Kind::SineMode:
      std::snprintf(buf, sizeof buf, "sine(j=%d, r_trunc=%.3g)", j_, a_);
      return buf;
    case Kind::Hat:
      std::snprintf(buf, sizeof buf, "hat(%.6g, %.6g, %.6g)", a_, b_, c_);
      return buf;
    case Kind::RScaled:
      return "r*" + inner_->describe();
    case Kind::Zero:
      return "zero";
  }
  return "?";
}

double TestFunction::value(double r) const {
  switch (kind_) {
    case Kind::PowerCutoff:
      return std::pow(std::max(r, b_), -a_) - 1.0;
    case Kind::SineMode:
      if (r < a_) return 0.0;
      return std::sin(j_ * std::numbers::pi * std::log(r) / b_);
    case Kind::Hat:
      if (r <= a_ || r >= c_) return 0.0;
      return r <= b_ ? (r - a_) / (b_ - a_) : (c_ - r) / (c_ - b_);
    case Kind::RScaled:
      return r * inner_->value(r);
    case Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

double TestFunction::derivative(double r) const {
  switch (kind_) {
    case Kind::PowerCutoff:
      return r < b_ ? 0.0 : -a_ * std::pow(r, -a_ - 1.0);
    case Kind::SineMode: {
      if (r < a_) return 0.0;
      const double k = j_ * std::numbers::pi / b_;
      return std::cos(k * std::log(r)) * k / r;
    }
    case Kind::Hat:
      if (r < a_ || r > c_) return 0.0;
      return r < b_ ? 1.0 / (b_ - a_) : -1.0 / (c_ - b_);
    case Kind::RScaled:
      return inner_->value(r) + r * inner_->derivative(r);
    case Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> TestFunction::breakpoints() const {
  switch (kind_) {
    case Kind::PowerCutoff:
      return {b_};
    case Kind::SineMode:
      return {a_};
    case Kind::Hat:
      return {a_, b_, c_};
    case Kind::RScaled:
      return inner_->breakpoints();
    case Kind::Zero:
      return {};
  }
  return {};
}

double TestFunction::support_lo() const {
  switch (kind_) {
    case Kind::SineMode:
    case Kind::Hat:
      return a_;
    case Kind::RScaled:
      return inner_->support_lo();
    default:
      return 0.0;
  }
}

// ---------------------------------------------------------------- quadrature

std::vector<double> make_partition(double lo, std::size_t cells, std::span<const double> breakpoints) {
  if (!(lo > 0.0 && lo < 1.0)) throw InvalidArgument("partition needs 0 < lo < 1");
  if (cells < 1) throw InvalidArgument("partition needs at least one cell");
  std::vector<double> nodes(cells + 1);
  const double log_lo = std::log(lo);
  for (std::size_t i = 0; i <= cells; ++i) {
    nodes[i] = std::exp(log_lo * (1.0 - static_cast<double>(i) / static_cast<double>(cells)));
  }
  nodes.front() = lo;
  nodes.back() = 1.0;
  for (double b : breakpoints) {
    if (b > lo && b < 1.0) nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> unique;
  unique.reserve(nodes.size());
  for (double x : nodes) {
    if (unique.empty() || x > unique.back() * (1.0 + 1e-13)) {
      unique.push_back(x);
    } else if (x == 1.0 || x == lo) {
      unique.back() = x;
    }
  }
  return unique;
}

double integrate_cells(std::span<const double> cells, const std::function<double(double)>& fn) {
  const auto& rule = detail::gauss_rule<8>();
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < cells.size(); ++e) {
    double acc = 0.0;
    rule.apply(cells[e], cells[e + 1], [&](double r, double w) { acc += w * fn(r); });
    total += acc;
  }
  return total;
}

namespace {

std::vector<double> cells_for(const RadialField& field, const TestFunction& f,
                              const QuadratureOptions& options) {
  if (!options.partition.empty()) return options.partition;
  const double lower =
      options.lower > 0.0 ? options.lower : std::max(field.r_lo(), f.support_lo());
  if (lower < field.r_lo() * (1.0 - 1e-12)) {
    throw InvalidArgument("quadrature lower limit is below the field's range");
  }
  const auto kinks = f.breakpoints();
  return make_partition(lower, options.cells, kinks);
}

// (p-1)|u_r|^{p-2} r^{n-1}, refusing the p < 2 blow-up at u_r = 0.
double stiffness_coefficient(const RadialField& field, double r) {
  const double p = field.p();
  const double slope = std::abs(field.u_r(r));
  if (slope == 0.0 && p < 2.0) {
    throw InvalidArgument("Q coefficient |u_r|^{p-2} is infinite where u_r = 0 (p < 2)");
  }
  return (p - 1.0) * std::pow(slope, p - 2.0) * std::pow(r, field.n() - 1.0);
}

template <typename Value, typename Slope>
double q_form(const RadialField& field, const DerivativeFn& g_prime, std::span<const double> cells,
              Value&& value, Slope&& slope) {
  const double n = field.n();
  return integrate_cells(cells, [&](double r) {
    const double xi = value(r);
    const double xi_r = slope(r);
    double out = 0.0;
    if (xi_r != 0.0) out += stiffness_coefficient(field, r) * xi_r * xi_r;
    if (xi != 0.0) out -= g_prime(field.u(r)) * std::pow(r, n - 1.0) * xi * xi;
    return out;
  });
}

}  // namespace

double Q_apply(const RadialField& field, const DerivativeFn& g_prime, const TestFunction& xi,
               const QuadratureOptions& options) {
  if (xi.kind() == TestFunction::Kind::Zero) return 0.0;
  const auto cells = cells_for(field, xi, options);
  const double q = q_form(
      field, g_prime, cells, [&](double r) { return xi.value(r); },
      [&](double r) { return xi.derivative(r); });
  if (!std::isfinite(q)) throw EvaluationError("Q(xi) is not finite");
  return q;
}

// ---------------------------------------------------------------- assembly

double TridiagonalPencil::quadratic_form(std::span<const double> xi) const {
  if (xi.size() != size()) throw InvalidArgument("vector size does not match the pencil");
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    acc += (a_diag[i] - b_diag[i]) * xi[i] * xi[i];
    if (i + 1 < size()) acc += 2.0 * (a_off[i] - b_off[i]) * xi[i] * xi[i + 1];
  }
  return acc;
}

TridiagonalPencil assemble_Q(const RadialField& field, const DerivativeFn& g_prime, double r_trunc,
                             std::size_t n_eig) {
  if (n_eig < 32) throw InvalidArgument("N_eig must be >= 32");
  if (!(r_trunc >= field.r_lo() * (1.0 - 1e-12) && r_trunc < 1.0)) {
    throw InvalidArgument("r_trunc must lie in [r_lo, 1)");
  }
  const RadialGrid grid = make_grid(r_trunc, n_eig + 1);
  TridiagonalPencil pencil;
  pencil.nodes.assign(grid.nodes().begin(), grid.nodes().end());

  const double n = field.n();
  const kernels::CellCoefficients coeff = [&](double r) -> std::array<double, 3> {
    const double weight = std::pow(r, n - 1.0);
    const std::array<double, 3> c{stiffness_coefficient(field, r), g_prime(field.u(r)) * weight,
                                  weight};
    for (double v : c) {
      if (!std::isfinite(v)) throw InvalidArgument("Q coefficient is not finite on a cell");
    }
    return c;
  };
  std::vector<kernels::ElementMatrices> elements(n_eig);
  kernels::element_matrices(pencil.nodes, coeff, elements);

  const std::size_t size = n_eig - 1;
  pencil.a_diag.assign(size, 0.0);
  pencil.b_diag.assign(size, 0.0);
  pencil.m_diag.assign(size, 0.0);
  pencil.a_off.assign(size - 1, 0.0);
  pencil.b_off.assign(size - 1, 0.0);
  pencil.m_off.assign(size - 1, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    // interior node i+1 sits between cells i and i+1
    const auto& left = elements[i];
    const auto& right = elements[i + 1];
    pencil.a_diag[i] = left.stiffness[2] + right.stiffness[0];
    pencil.b_diag[i] = left.reaction[2] + right.reaction[0];
    pencil.m_diag[i] = left.mass[2] + right.mass[0];
    if (i + 1 < size) {
      pencil.a_off[i] = right.stiffness[1];
      pencil.b_off[i] = right.reaction[1];
      pencil.m_off[i] = right.mass[1];
    }
  }
  return pencil;
}

// ---------------------------------------------------------------- eigenvalue

std::size_t count_below(const TridiagonalPencil& pencil, double shift) {
  const std::size_t size = pencil.size();
  std::size_t negatives = 0;
  double pivot = 0.0;
  double prev_scale = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    // Symmetric diagonal scaling by M_ii^{-1/2} keeps the pivots O(mu).
    const double scale = 1.0 / std::sqrt(pencil.m_diag[i]);
    const double diag =
        (pencil.a_diag[i] - pencil.b_diag[i] - shift * pencil.m_diag[i]) * scale * scale;
    if (i == 0) {
      pivot = diag;
    } else {
      const double off =
          (pencil.a_off[i - 1] - pencil.b_off[i - 1] - shift * pencil.m_off[i - 1]) * scale *
          prev_scale;
      pivot = diag - off * off / pivot;
    }
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::min();
    if (pivot < 0.0) ++negatives;
    prev_scale = scale;
  }
  return negatives;
}

namespace {

// Solves (A - B - shift M) x = rhs by tridiagonal elimination.
bool solve_shifted(const TridiagonalPencil& pencil, double shift, std::span<const double> rhs,
                   std::span<double> x) {
  const std::size_t size = pencil.size();
  std::vector<double> c(size, 0.0);
  std::vector<double> d(size, 0.0);
  double denom = pencil.a_diag[0] - pencil.b_diag[0] - shift * pencil.m_diag[0];
  for (std::size_t i = 0; i < size; ++i) {
    if (i > 0) {
      const double lower = pencil.a_off[i - 1] - pencil.b_off[i - 1] - shift * pencil.m_off[i - 1];
      denom = pencil.a_diag[i] - pencil.b_diag[i] - shift * pencil.m_diag[i] - lower * c[i - 1];
      if (denom == 0.0 || !std::isfinite(denom)) return false;
      d[i] = (rhs[i] - lower * d[i - 1]) / denom;
    } else {
      if (denom == 0.0 || !std::isfinite(denom)) return false;
      d[0] = rhs[0] / denom;
    }
    if (i + 1 < size) {
      c[i] = (pencil.a_off[i] - pencil.b_off[i] - shift * pencil.m_off[i]) / denom;
    }
  }
  x[size - 1] = d[size - 1];
  for (std::size_t i = size - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return true;
}

double mass_product(const TridiagonalPencil& pencil, std::span<const double> x,
                    std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pencil.size(); ++i) {
    acc += pencil.m_diag[i] * x[i] * y[i];
    if (i + 1 < pencil.size()) acc += pencil.m_off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  }
  return acc;
}

void apply_mass(const TridiagonalPencil& pencil, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < pencil.size(); ++i) {
    out[i] = pencil.m_diag[i] * x[i];
    if (i > 0) out[i] += pencil.m_off[i - 1] * x[i - 1];
    if (i + 1 < pencil.size()) out[i] += pencil.m_off[i] * x[i + 1];
  }
}

}  // namespace

EigenResult min_eigenvalue(const TridiagonalPencil& pencil) {
  const std::size_t size = pencil.size();
  if (size == 0) throw InvalidArgument("empty pencil");
  for (double m : pencil.m_diag) {
    if (!(m > 0.0)) throw InvalidArgument("mass matrix is singular (degenerate cell)");
  }
  EigenResult result;
  result.scale = *std::max_element(pencil.m_diag.begin(), pencil.m_diag.end());

  double lo = -1.0;
  double hi = 1.0;
  if (count_below(pencil, hi) == 0) {
    lo = hi;
    do {
      hi *= 4.0;
      if (!std::isfinite(hi)) throw EvaluationError("could not bracket the smallest eigenvalue");
    } while (count_below(pencil, hi) == 0);
  } else {
    while (count_below(pencil, lo) > 0) {
      hi = lo;
      lo *= 4.0;
      if (!std::isfinite(lo)) throw EvaluationError("could not bracket the smallest eigenvalue");
    }
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-10 * std::max(result.scale, std::abs(mid)) || mid <= lo || mid >= hi) break;
    if (count_below(pencil, mid) == 0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++result.bisections;
  }
  result.lower = lo;
  result.upper = hi;
  result.mu_1 = 0.5 * (lo + hi);

  // Inverse iteration just below the certified lower bound.
  std::vector<double> x(size, 1.0);
  std::vector<double> rhs(size);
  const double shift = lo - 1e-3 * (hi - lo) - 1e-14 * std::abs(lo);
  bool ok = true;
  for (int it = 0; it < 8 && ok; ++it) {
    apply_mass(pencil, x, rhs);
    ok = solve_shifted(pencil, shift, rhs, x);
    if (!ok) break;
    const double norm = std::sqrt(mass_product(pencil, x, x));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      ok = false;
      break;
    }
    for (double& v : x) v /= norm;
  }
  if (ok) {
    result.rayleigh = pencil.quadratic_form(x) / mass_product(pencil, x, x);
    result.vector = std::move(x);
  } else {
    result.rayleigh = result.mu_1;
  }
  return result;
}

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::SemiStable:
      return "semi-stable";
    case Verdict::Unstable:
      return "unstable";
    case Verdict::Marginal:
      return "marginal";
  }
  return "?";
}

StabilityReport analyze_stability(const RadialField& field, const DerivativeFn& g_prime,
                                  const StabilityControls& controls) {
  const TridiagonalPencil pencil = assemble_Q(field, g_prime, controls.r_trunc, controls.n_eig);
  const EigenResult eig = min_eigenvalue(pencil);

  StabilityReport report;
  report.mu_1 = eig.mu_1;
  report.mu_lower = eig.lower;
  report.mu_upper = eig.upper;
  report.rayleigh_min = eig.rayleigh;
  report.scale = eig.scale;
  report.r_trunc = controls.r_trunc;
  report.n_eig = controls.n_eig;
  report.tol_eig = controls.tol_eig;

  const double threshold = controls.tol_eig * eig.scale;
  if (eig.mu_1 >= -threshold) {
    report.verdict = Verdict::SemiStable;
  } else if (eig.mu_1 < -10.0 * threshold) {
    report.verdict = Verdict::Unstable;
  } else {
    report.verdict = Verdict::Marginal;
  }

  report.mu_1_coarse_trunc = std::numeric_limits<double>::quiet_NaN();
  if (controls.sensitivity && controls.r_trunc * 10.0 < 1.0) {
    const auto coarse = assemble_Q(field, g_prime, controls.r_trunc * 10.0, controls.n_eig);
    report.mu_1_coarse_trunc = min_eigenvalue(coarse).mu_1;
  }
  return report;
}

// ---------------------------------------------------------------- identities

double lemma21_rhs(const RadialField& field, const TestFunction& eta,
                   const QuadratureOptions& options) {
  if (eta.kind() == TestFunction::Kind::Zero) return 0.0;
  const auto cells = cells_for(field, eta, options);
  const double n = field.n();
  const double p = field.p();
  return integrate_cells(cells, [&](double r) {
    const double e = eta.value(r);
    const double e_r = eta.derivative(r);
    const double weight = std::pow(std::abs(field.u_r(r)), p) * std::pow(r, n - 1.0);
    return weight * ((p - 1.0) * e_r * e_r - (n - 1.0) * e * e / (r * r));
  });
}

IdentityResult lemma21_identity(const RadialField& field, const DerivativeFn& g_prime,
                                const TestFunction& eta, const QuadratureOptions& options,
                                double floor) {
  if (eta.kind() == TestFunction::Kind::Zero) return {};
  IdentityResult out;
  const auto cells = cells_for(field, eta, options);
  out.lhs = q_form(
      field, g_prime, cells, [&](double r) { return field.u_r(r) * eta.value(r); },
      [&](double r) { return field.u_rr(r) * eta.value(r) + field.u_r(r) * eta.derivative(r); });
  out.rhs = lemma21_rhs(field, eta, options.partition.empty() ? QuadratureOptions{0.0, 0, cells}
                                                              : options);
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max({std::abs(out.lhs), std::abs(out.rhs), floor});
  return out;
}

IdentityResult lemma21_identity(const RadialProfile& profile, const Nonlinearity& g,
                                const TestFunction& eta, double residual_bound,
                                const QuadratureOptions& options) {
  const double residual = ode_residual(profile, g);
  if (!(residual <= residual_bound)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "profile residual %.3g exceeds the bound %.3g", residual,
                  residual_bound);
    throw PreconditionFailed(buf);
  }
  const SplineField field(profile);
  return lemma21_identity(
      field, [&g](double t) { return g.g_prime(t); }, eta, options);
}

std::vector<HardyResult> hardy_inequality_check(const RadialField& field,
                                                std::span<const TestFunction> etas,
                                                const QuadratureOptions& options) {
  const double n = field.n();
  const double p = field.p();
  std::vector<HardyResult> results;
  results.reserve(etas.size());
  for (const auto& eta : etas) {
    HardyResult h;
    h.eta = eta.describe();
    if (eta.kind() != TestFunction::Kind::Zero) {
      const auto cells = cells_for(field, eta, options);
      h.lhs = (n - 1.0) * integrate_cells(cells, [&](double r) {
                const double e = eta.value(r);
                return std::pow(std::abs(field.u_r(r)), p) * e * e * std::pow(r, n - 1.0);
              });
      h.rhs = (p - 1.0) * integrate_cells(cells, [&](double r) {
                const double scaled = eta.value(r) + r * eta.derivative(r);
                return std::pow(std::abs(field.u_r(r)), p) * scaled * scaled * std::pow(r, n - 1.0);
              });
    }
    h.satisfied = h.lhs <= h.rhs * (1.0 + 1e-8);
    results.push_back(std::move(h));
  }
  return results;
}

KeyEstimate key_estimate_lhs(const RadialField& field, double alpha,
                             const QuadratureOptions& options) {
  const double n = field.n();
  const double p = field.p();
  const double upper = 1.0 + std::sqrt((n - 1.0) / (p - 1.0));
  if (!(alpha >= 1.0 && alpha < upper)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "alpha must lie in [1, %.10g)", upper);
    throw InvalidArgument(buf);
  }
  const auto cells = cells_for(field, TestFunction::zero(), options);
  KeyEstimate k;
  k.lhs = integrate_cells(cells, [&](double r) {
    return std::pow(std::abs(field.u_r(r)), p) * std::pow(r, n - 1.0 - 2.0 * alpha);
  });
  k.gradient_p = integrate_cells(
      cells, [&](double r) { return std::pow(std::abs(field.u_r(r)), p) * std::pow(r, n - 1.0); });
  const double factor = (n - 1.0) - (alpha - 1.0) * (alpha - 1.0) * (p - 1.0);
  k.implied_constant = k.gradient_p > 0.0 ? k.lhs * factor / k.gradient_p : 0.0;
  return k;
}

}  // namespace plap
