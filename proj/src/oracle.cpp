#include "plap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "plap/kernels.hpp"

namespace plap {

ExactSolution exact_exponential(double n, double p) {
  ProblemSpec{n, p}.validate();
  if (!(n > p)) throw InvalidArgument("exponential exact solution needs n > p");
  ExactSolution s;
  s.kind_ = ExactSolution::Kind::ExponentialSingular;
  s.n_ = n;
  s.p_ = p;
  s.lambda_star_ = std::pow(p, p - 1.0) * (n - p);
  return s;
}

ExactSolution exact_power(double n, double p, double m) {
  ProblemSpec{n, p}.validate();
  if (!(m > p - 1.0)) throw InvalidArgument("power exact solution needs m > p - 1");
  const double beta = p / (m - (p - 1.0));
  const double lambda_star = std::pow(beta, p - 1.0) * (n - m * beta);
  if (!(lambda_star > 0.0)) throw InvalidArgument("power exact solution needs lambda* > 0");
  ExactSolution s;
  s.kind_ = ExactSolution::Kind::PowerSingular;
  s.n_ = n;
  s.p_ = p;
  s.m_ = m;
  s.beta_ = beta;
  s.lambda_star_ = lambda_star;
  return s;
}

double ExactSolution::m() const {
  if (kind_ != Kind::PowerSingular) throw InvalidArgument("m is defined only for the power family");
  return m_;
}

ExactSolution ExactSolution::with_r_lo(double r_lo) const {
  if (!(r_lo > 0.0 && r_lo < 1.0)) throw InvalidArgument("r_lo must lie in (0, 1)");
  ExactSolution copy = *this;
  copy.r_lo_ = r_lo;
  return copy;
}

double ExactSolution::u(double r) const {
  if (kind_ == Kind::ExponentialSingular) return -p_ * std::log(r);
  return std::pow(r, -beta_) - 1.0;
}

double ExactSolution::u_r(double r) const {
  if (kind_ == Kind::ExponentialSingular) return -p_ / r;
  return -beta_ * std::pow(r, -beta_ - 1.0);
}

double ExactSolution::u_rr(double r) const {
  if (kind_ == Kind::ExponentialSingular) return p_ / (r * r);
  return beta_ * (beta_ + 1.0) * std::pow(r, -beta_ - 2.0);
}

Nonlinearity ExactSolution::nonlinearity() const {
  if (kind_ == Kind::ExponentialSingular) return Nonlinearity::exponential(lambda_star_);
  return Nonlinearity::power(m_, lambda_star_);
}

ProblemSpec ExactSolution::problem() const { return ProblemSpec{n_, p_, nonlinearity()}; }

RadialProfile ExactSolution::sample(const RadialGrid& grid) const {
  std::vector<double> u_values(grid.size());
  std::vector<double> slopes(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u_values[i] = u(grid[i]);
    slopes[i] = u_r(grid[i]);
  }
  return RadialProfile::from_slope(grid, n_, p_, std::move(u_values), std::move(slopes));
}

double ode_residual(const RadialProfile& profile, const Nonlinearity& g) {
  const auto& grid = profile.grid();
  const std::size_t count = grid.size();
  const double n = profile.n();

  std::vector<double> dw_ds(count);
  kernels::centered_derivative(profile.w(), grid.log_step(), dw_ds);

  std::vector<double> g_values(count);
  kernels::transform(profile.u(), g_values, [&g](double t) { return g.g(t); });

  double worst = 0.0;
  double source_scale = 0.0;
  for (std::size_t i = 3; i + 3 < count; ++i) {
    const double r = grid[i];
    const double source = std::pow(r, n - 1.0) * g_values[i];
    if (!std::isfinite(source)) throw EvaluationError("non-finite source term in residual");
    worst = std::max(worst, std::abs(dw_ds[i] / r + source));
    source_scale = std::max(source_scale, std::abs(source));
  }
  return source_scale > 0.0 ? worst / source_scale : worst;
}

}  // namespace plap
