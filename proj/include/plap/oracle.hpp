#pragma once

// Closed-form singular solutions used as ground truth:
//   exponential:  u(r) = -p log r,              lambda* = p^{p-1} (n - p)
//   power:        u(r) = r^{-p/(m-(p-1))} - 1,  lambda* = (p/(m-(p-1)))^{p-1} (n - m p/(m-(p-1)))
// and the flux-form residual of the radial equation.

#include "plap/core.hpp"
#include "plap/field.hpp"

namespace plap {

class ExactSolution final : public RadialField {
 public:
  enum class Kind { ExponentialSingular, PowerSingular };

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double n() const override { return n_; }
  [[nodiscard]] double p() const override { return p_; }
  /// Power exponent m; InvalidArgument for the exponential family.
  [[nodiscard]] double m() const;
  [[nodiscard]] double lambda_star() const { return lambda_star_; }
  /// beta in u ~ r^{-beta}; 0 for the logarithmic (exponential) family.
  [[nodiscard]] double singularity_exponent() const { return beta_; }

  [[nodiscard]] double r_lo() const override { return r_lo_; }
  /// Copy whose evaluation range starts at r_lo (default 1e-8).
  [[nodiscard]] ExactSolution with_r_lo(double r_lo) const;

  [[nodiscard]] double u(double r) const override;
  [[nodiscard]] double u_r(double r) const override;
  [[nodiscard]] double u_rr(double r) const override;

  /// g = lambda* e^u or lambda* (1+u)^m.
  [[nodiscard]] Nonlinearity nonlinearity() const;
  [[nodiscard]] ProblemSpec problem() const;
  /// Nodal values of u and u_r on a grid.
  [[nodiscard]] RadialProfile sample(const RadialGrid& grid) const;

  friend ExactSolution exact_exponential(double n, double p);
  friend ExactSolution exact_power(double n, double p, double m);

 private:
  ExactSolution() = default;
  Kind kind_ = Kind::ExponentialSingular;
  double n_ = 0.0;
  double p_ = 0.0;
  double m_ = 0.0;
  double beta_ = 0.0;
  double lambda_star_ = 0.0;
  double r_lo_ = 1e-8;
};

/// Requires n > p > 1.
ExactSolution exact_exponential(double n, double p);
/// Requires m > p - 1 and n > m p / (m - (p-1)).
ExactSolution exact_power(double n, double p, double m);

/// max_i |w'(r_i) + r_i^{n-1} g(u_i)| / max_i r_i^{n-1}|g(u_i)| over interior
/// nodes, with w' from sixth-order centred differences in log r. Falls back
/// to the unnormalized maximum when the source vanishes identically.
double ode_residual(const RadialProfile& profile, const Nonlinearity& g);

}  // namespace plap
