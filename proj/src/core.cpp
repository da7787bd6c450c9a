#include "plap/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/interpolators/cubic_hermite.hpp>

#include "plap/kernels.hpp"

namespace plap {

// ---------------------------------------------------------------- ExtendedReal

double ExtendedReal::value() const {
  if (!finite_) throw InvalidArgument("extended real is +infinity");
  return value_;
}

double ExtendedReal::as_double() const {
  return finite_ ? value_ : std::numeric_limits<double>::infinity();
}

std::string ExtendedReal::str() const {
  if (!finite_) return "+inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

// ---------------------------------------------------------------- Nonlinearity

struct Nonlinearity::Table {
  using Hermite = boost::math::interpolators::cubic_hermite<std::vector<double>>;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::unique_ptr<Hermite> f;
  std::unique_ptr<Hermite> antiderivative;
};

namespace {

// Fritsch-Carlson: zero slopes that oppose the secant and pull (alpha, beta)
// into the radius-3 disc, so every monotone interval stays monotone.
void limit_slopes(const std::vector<double>& t, const std::vector<double>& y,
                  std::vector<double>& d) {
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double secant = (y[k + 1] - y[k]) / (t[k + 1] - t[k]);
    if (secant == 0.0) {
      d[k] = 0.0;
      d[k + 1] = 0.0;
      continue;
    }
    if (d[k] * secant < 0.0) d[k] = 0.0;
    if (d[k + 1] * secant < 0.0) d[k + 1] = 0.0;
    const double a = d[k] / secant;
    const double b = d[k + 1] / secant;
    const double radius2 = a * a + b * b;
    if (radius2 > 9.0) {
      const double tau = 3.0 / std::sqrt(radius2);
      d[k] = tau * a * secant;
      d[k + 1] = tau * b * secant;
    }
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

}  // namespace

Nonlinearity Nonlinearity::exponential(double lambda) {
  require_finite(lambda, "lambda");
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  Nonlinearity g;
  g.kind_ = Kind::Exponential;
  g.lambda_ = lambda;
  return g;
}

Nonlinearity Nonlinearity::power(double m, double lambda) {
  require_finite(lambda, "lambda");
  require_finite(m, "power exponent m");
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  if (m < 0.0) throw InvalidArgument("power exponent m must be nonnegative");
  Nonlinearity g;
  g.kind_ = Kind::Power;
  g.lambda_ = lambda;
  g.m_ = m;
  return g;
}

Nonlinearity Nonlinearity::tabulated(std::vector<TableNode> nodes, double lambda) {
  require_finite(lambda, "lambda");
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  if (nodes.size() < 2) throw InvalidArgument("tabulated nonlinearity needs at least 2 nodes");
  const bool with_antiderivative =
      std::all_of(nodes.begin(), nodes.end(), [](const TableNode& n) { return n.antiderivative.has_value(); });
  std::vector<double> t, f, d, big_f;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& node = nodes[k];
    require_finite(node.t, "table t");
    require_finite(node.f, "table f");
    require_finite(node.f_prime, "table f'");
    if (k > 0 && !(node.t > nodes[k - 1].t)) {
      throw InvalidArgument("tabulated nodes must be strictly increasing in t");
    }
    t.push_back(node.t);
    f.push_back(node.f);
    d.push_back(node.f_prime);
    if (with_antiderivative) big_f.push_back(*node.antiderivative);
  }
  auto table = std::make_shared<Table>();
  table->t_lo = t.front();
  table->t_hi = t.back();
  if (with_antiderivative) {
    // Slopes of F are the raw f values; no limiting.
    table->antiderivative = std::make_unique<Table::Hermite>(std::vector<double>(t),
                                                             std::move(big_f), std::vector<double>(f));
  }
  limit_slopes(t, f, d);
  table->f = std::make_unique<Table::Hermite>(std::move(t), std::move(f), std::move(d));

  Nonlinearity g;
  g.kind_ = Kind::Tabulated;
  g.lambda_ = lambda;
  g.table_ = std::move(table);
  return g;
}

double Nonlinearity::m() const {
  if (kind_ != Kind::Power) throw InvalidArgument("m is defined only for the power nonlinearity");
  return m_;
}

Nonlinearity Nonlinearity::with_lambda(double lambda) const {
  require_finite(lambda, "lambda");
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  Nonlinearity g = *this;
  g.lambda_ = lambda;
  return g;
}

namespace {

void check_table_range(double t, double lo, double hi) {
  if (!(t >= lo && t <= hi)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "tabulated nonlinearity evaluated at %.6g outside [%.6g, %.6g]",
                  t, lo, hi);
    throw EvaluationError(buf);
  }
}

}  // namespace

double Nonlinearity::f(double t) const {
  switch (kind_) {
    case Kind::Exponential:
      return std::exp(t);
    case Kind::Power: {
      const double base = 1.0 + t;
      if (base <= 0.0) return m_ == 0.0 ? 1.0 : 0.0;
      return std::pow(base, m_);
    }
    case Kind::Tabulated:
      check_table_range(t, table_->t_lo, table_->t_hi);
      return (*table_->f)(t);
  }
  return 0.0;
}

double Nonlinearity::f_prime(double t) const {
  switch (kind_) {
    case Kind::Exponential:
      return std::exp(t);
    case Kind::Power: {
      const double base = 1.0 + t;
      if (base <= 0.0 || m_ == 0.0) return 0.0;
      return m_ * std::pow(base, m_ - 1.0);
    }
    case Kind::Tabulated:
      check_table_range(t, table_->t_lo, table_->t_hi);
      return table_->f->prime(t);
  }
  return 0.0;
}

bool Nonlinearity::has_antiderivative() const {
  return kind_ != Kind::Tabulated || table_->antiderivative != nullptr;
}

double Nonlinearity::G(double t) const {
  switch (kind_) {
    case Kind::Exponential:
      return lambda_ * std::exp(t);
    case Kind::Power: {
      const double base = std::max(1.0 + t, 0.0);
      return lambda_ * std::pow(base, m_ + 1.0) / (m_ + 1.0);
    }
    case Kind::Tabulated:
      if (!table_->antiderivative) {
        throw InvalidArgument("tabulated nonlinearity has no antiderivative column");
      }
      check_table_range(t, table_->t_lo, table_->t_hi);
      return lambda_ * (*table_->antiderivative)(t);
  }
  return 0.0;
}

std::pair<double, double> Nonlinearity::table_range() const {
  if (kind_ != Kind::Tabulated) {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  return {table_->t_lo, table_->t_hi};
}

std::string Nonlinearity::kind_name() const {
  switch (kind_) {
    case Kind::Exponential:
      return "exponential";
    case Kind::Power:
      return "power";
    case Kind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

// ---------------------------------------------------------------- ProblemSpec

void ProblemSpec::validate() const {
  if (!std::isfinite(n) || n < 1.0) throw InvalidArgument("dimension n must be >= 1");
  if (!std::isfinite(p) || p <= 1.0) throw InvalidArgument("exponent p must be > 1");
}

bool ProblemSpec::integer_dimension() const { return n == std::floor(n); }

ProblemSpec ProblemSpec::with_lambda(double lambda) const {
  ProblemSpec copy = *this;
  copy.nonlinearity = nonlinearity.with_lambda(lambda);
  return copy;
}

// ---------------------------------------------------------------- RadialGrid

RadialGrid make_grid(double r_min, std::size_t count) {
  if (!(r_min > 0.0 && r_min < 1.0)) throw InvalidArgument("r_min must lie in (0, 1)");
  if (count < kMinGridNodes) throw InvalidArgument("grid needs at least 16 nodes");
  const double log_lo = std::log(r_min);
  const double step = -log_lo / static_cast<double>(count - 1);
  std::vector<double> nodes(count);
  for (std::size_t i = 0; i < count; ++i) {
    nodes[i] = std::exp(log_lo + step * static_cast<double>(i));
  }
  nodes.front() = r_min;
  nodes.back() = 1.0;
  return RadialGrid(std::move(nodes), step);
}

// ---------------------------------------------------------------- Quadrature

IntervalRule::IntervalRule(const RadialGrid& grid, double weight_power)
    : weight_power_(weight_power), start_(grid.size() - 1), weights_(grid.size() - 1) {
  kernels::interval_weights(grid.nodes(), weight_power, start_, weights_);
}

double IntervalRule::apply(std::size_t i, std::span<const double> h) const {
  const auto& w = weights_[i];
  const std::size_t j = start_[i];
  return w[0] * h[j] + w[1] * h[j + 1] + w[2] * h[j + 2] + w[3] * h[j + 3];
}

QuadratureRule::QuadratureRule(const RadialGrid& grid, double n)
    : grid_(grid), n_(n), intervals_(grid, n - 1.0), weights_(grid.size(), 0.0) {
  if (!(n >= 1.0)) throw InvalidArgument("dimension n must be >= 1");
  for (std::size_t i = 0; i < intervals_.intervals(); ++i) {
    const auto& w = intervals_.weights(i);
    for (std::size_t c = 0; c < 4; ++c) weights_[intervals_.start(i) + c] += w[c];
  }
  weights_[0] += std::pow(grid.r_min(), n) / n;
}

namespace {

void require_all_finite(std::span<const double> h) {
  for (double v : h) {
    if (!std::isfinite(v)) throw InvalidArgument("integrand has non-finite values");
  }
}

}  // namespace

double QuadratureRule::integrate(std::span<const double> h) const {
  if (h.size() != weights_.size()) throw InvalidArgument("integrand size does not match grid");
  require_all_finite(h);
  return kernels::weighted_sum(weights_, h);
}

double QuadratureRule::integrate_from(std::span<const double> h, std::size_t k) const {
  if (h.size() != weights_.size()) throw InvalidArgument("integrand size does not match grid");
  if (k + 1 >= h.size()) throw InvalidArgument("lower node index out of range");
  require_all_finite(h);
  double acc = h[k] * std::pow(grid_[k], n_) / n_;
  for (std::size_t i = k; i < intervals_.intervals(); ++i) acc += intervals_.apply(i, h);
  return acc;
}

double integrate_radial(std::span<const double> h, const QuadratureRule& rule) {
  return rule.integrate(h);
}

// ---------------------------------------------------------------- RadialProfile

double slope_from_flux(double w, double r, double n, double p) {
  if (w == 0.0) return 0.0;
  const double magnitude = std::exp((std::log(std::abs(w)) - (n - 1.0) * std::log(r)) / (p - 1.0));
  return w < 0.0 ? -magnitude : magnitude;
}

double flux_from_slope(double u_r, double r, double n, double p) {
  if (u_r == 0.0) return 0.0;
  const double magnitude = std::exp((n - 1.0) * std::log(r) + (p - 1.0) * std::log(std::abs(u_r)));
  return u_r < 0.0 ? -magnitude : magnitude;
}

RadialProfile::RadialProfile(RadialGrid grid, double n, double p, std::vector<double> u,
                             std::vector<double> w, std::vector<double> u_r)
    : grid_(std::move(grid)), n_(n), p_(p), u_(std::move(u)), w_(std::move(w)), u_r_(std::move(u_r)) {
  check_invariants();
}

void RadialProfile::check_invariants() const {
  ProblemSpec{n_, p_}.validate();
  const std::size_t count = grid_.size();
  if (u_.size() != count || w_.size() != count || u_r_.size() != count) {
    throw InvalidArgument("profile fields must match the grid size");
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(u_[i]) || !std::isfinite(w_[i]) || !std::isfinite(u_r_[i])) {
      throw InvalidArgument("profile has non-finite values");
    }
    if (w_[i] > 0.0) throw InvalidArgument("profile flux must be <= 0 (radially decreasing)");
    if (i + 1 < count) {
      const double slack = 1e-12 * std::max({std::abs(u_[i]), std::abs(u_[i + 1]), 1e-300});
      if (u_[i + 1] > u_[i] + slack) {
        throw InvalidArgument("profile must be nonincreasing in r");
      }
    }
  }
}

RadialProfile RadialProfile::from_flux(RadialGrid grid, double n, double p, std::vector<double> u,
                                       std::vector<double> w) {
  std::vector<double> u_r(w.size());
  if (w.size() == grid.size()) {
    for (std::size_t i = 0; i < w.size(); ++i) u_r[i] = slope_from_flux(w[i], grid[i], n, p);
  }
  return RadialProfile(std::move(grid), n, p, std::move(u), std::move(w), std::move(u_r));
}

RadialProfile RadialProfile::from_slope(RadialGrid grid, double n, double p, std::vector<double> u,
                                        std::vector<double> u_r) {
  std::vector<double> w(u_r.size());
  if (u_r.size() == grid.size()) {
    for (std::size_t i = 0; i < u_r.size(); ++i) w[i] = flux_from_slope(u_r[i], grid[i], n, p);
  }
  return from_flux(std::move(grid), n, p, std::move(u), std::move(w));
}

RadialProfile RadialProfile::from_fields(RadialGrid grid, double n, double p, std::vector<double> u,
                                         std::vector<double> w, std::vector<double> u_r) {
  if (w.size() == grid.size() && u_r.size() == grid.size()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double expected = slope_from_flux(w[i], grid[i], n, p);
      if (std::abs(expected - u_r[i]) > 1e-12 * std::max(std::abs(expected), 1e-300)) {
        throw InvalidArgument("profile u_r is inconsistent with the flux w");
      }
    }
  }
  return RadialProfile(std::move(grid), n, p, std::move(u), std::move(w), std::move(u_r));
}

bool RadialProfile::non_integer_dimension() const { return n_ != std::floor(n_); }

double RadialProfile::center_value() const {
  // Near 0, u_r ~ -c r^{1/(p-1)}; integrating over [0, r_min] gives
  // (p-1)/p * |u_r(r_min)| * r_min.
  return u_.front() + (p_ - 1.0) / p_ * std::abs(u_r_.front()) * grid_.r_min();
}

RadialProfile RadialProfile::normalized() const {
  std::vector<double> shifted(u_);
  const double boundary = u_.back();
  for (double& v : shifted) v -= boundary;
  return RadialProfile(grid_, n_, p_, std::move(shifted), w_, u_r_);
}

// ---------------------------------------------------------------- energy

double energy(const RadialProfile& profile, const std::function<double(double)>& G) {
  const QuadratureRule rule(profile.grid(), profile.n());
  std::vector<double> h(profile.size());
  const auto u = profile.u();
  const auto u_r = profile.u_r();
  const double p = profile.p();
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = std::pow(std::abs(u_r[i]), p) / p - G(u[i]);
  }
  return rule.integrate(h);
}

double energy(const RadialProfile& profile, const Nonlinearity& g) {
  if (!g.has_antiderivative()) {
    throw InvalidArgument("energy needs an antiderivative; supply G nodes for tabulated f");
  }
  return energy(profile, [&g](double t) { return g.G(t); });
}

}  // namespace plap
