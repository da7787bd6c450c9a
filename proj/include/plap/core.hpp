#pragma once

// Domain types shared by every module: nonlinearities, problem instances,
// log-spaced radial grids, weighted quadrature and discrete radial profiles.
//
// Integrals are reported in "radial units": the measure r^{n-1} dr on (0,1),
// i.e. the ball measure divided by |dB_1|.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plap/error.hpp"

namespace plap {

/// A real number or +infinity. Infinity is a tag, never a floating sentinel.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v), finite_(true) {}
  static constexpr ExtendedReal infinity() {
    ExtendedReal x;
    x.finite_ = false;
    return x;
  }

  [[nodiscard]] constexpr bool is_finite() const { return finite_; }
  /// Throws InvalidArgument when infinite.
  [[nodiscard]] double value() const;
  /// Finite value or +inf as a double, for arithmetic comparisons only.
  [[nodiscard]] double as_double() const;
  [[nodiscard]] std::string str() const;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  double value_ = 0.0;
  bool finite_ = true;
};

/// One node of a tabulated nonlinearity: f(t), f'(t) and optionally F(t),
/// an antiderivative of f (needed only for energies).
struct TableNode {
  double t = 0.0;
  double f = 0.0;
  double f_prime = 0.0;
  std::optional<double> antiderivative;
};

/// g = lambda * f with f one of e^u, (1+u)^m, or a monotone cubic table.
///
/// The power law is extended by its positive part, (1+u)_+^m, so that it
/// is defined on all of R. Tabulated f uses Hermite cubics through the given
/// slopes, limited (Fritsch-Carlson) wherever the data is monotone.
class Nonlinearity {
 public:
  enum class Kind { Exponential, Power, Tabulated };

  static Nonlinearity exponential(double lambda = 1.0);
  static Nonlinearity power(double m, double lambda = 1.0);
  static Nonlinearity tabulated(std::vector<TableNode> nodes, double lambda = 1.0);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  /// Power exponent; InvalidArgument for other kinds.
  [[nodiscard]] double m() const;
  [[nodiscard]] Nonlinearity with_lambda(double lambda) const;

  [[nodiscard]] double f(double t) const;
  [[nodiscard]] double f_prime(double t) const;
  [[nodiscard]] double g(double t) const { return lambda_ * f(t); }
  [[nodiscard]] double g_prime(double t) const { return lambda_ * f_prime(t); }

  /// Whether G = antiderivative of g is available (always for closed forms).
  [[nodiscard]] bool has_antiderivative() const;
  /// G(t) with G' = g. Exponential: lambda e^t; power: lambda (1+t)^{m+1}/(m+1).
  [[nodiscard]] double G(double t) const;

  /// Closed interval on which a tabulated f can be evaluated.
  [[nodiscard]] std::pair<double, double> table_range() const;
  [[nodiscard]] std::string kind_name() const;

 private:
  struct Table;
  Kind kind_ = Kind::Exponential;
  double lambda_ = 1.0;
  double m_ = 0.0;
  std::shared_ptr<const Table> table_;
};

/// -div(|grad u|^{p-2} grad u) = g(u) on the unit ball of R^n.
struct ProblemSpec {
  double n = 2.0;
  double p = 2.0;
  Nonlinearity nonlinearity = Nonlinearity::exponential();

  /// Throws InvalidArgument unless n >= 1 and p > 1.
  void validate() const;
  [[nodiscard]] bool integer_dimension() const;
  [[nodiscard]] ProblemSpec with_lambda(double lambda) const;
};

/// Nodes r_0 = r_min < ... < r_{N-1} = 1, uniformly spaced in log r.
class RadialGrid {
 public:
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] double r_min() const { return nodes_.front(); }
  [[nodiscard]] double operator[](std::size_t i) const { return nodes_[i]; }
  [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
  /// Spacing in s = log r.
  [[nodiscard]] double log_step() const { return log_step_; }

  friend RadialGrid make_grid(double r_min, std::size_t count);

 private:
  RadialGrid(std::vector<double> nodes, double log_step)
      : nodes_(std::move(nodes)), log_step_(log_step) {}
  std::vector<double> nodes_;
  double log_step_ = 0.0;
};

inline constexpr std::size_t kMinGridNodes = 16;

/// Log-spaced grid on [r_min, 1]. Requires 0 < r_min < 1 and count >= 16.
RadialGrid make_grid(double r_min, std::size_t count);

/// Per-interval product rules for int_{r_i}^{r_{i+1}} h(r) r^k dr: the
/// cubic through four neighbouring nodes, integrated exactly against r^k.
class IntervalRule {
 public:
  IntervalRule(const RadialGrid& grid, double weight_power);

  [[nodiscard]] std::size_t intervals() const { return start_.size(); }
  [[nodiscard]] std::size_t start(std::size_t i) const { return start_[i]; }
  [[nodiscard]] const std::array<double, 4>& weights(std::size_t i) const { return weights_[i]; }
  [[nodiscard]] double weight_power() const { return weight_power_; }

  /// Integral over interval i of the interpolant of h.
  [[nodiscard]] double apply(std::size_t i, std::span<const double> h) const;

 private:
  double weight_power_;
  std::vector<std::size_t> start_;
  std::vector<std::array<double, 4>> weights_;
};

/// Node weights for int_0^1 h(r) r^{n-1} dr on a RadialGrid.
///
/// Interior: cubic product rule (exact for h a cubic in r). Head [0, r_min]:
/// h taken constant at h(r_min), i.e. h(r_min) r_min^n / n, error O(r_min^n).
class QuadratureRule {
 public:
  QuadratureRule(const RadialGrid& grid, double n);

  [[nodiscard]] double n() const { return n_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] const IntervalRule& intervals() const { return intervals_; }
  [[nodiscard]] const RadialGrid& grid() const { return grid_; }

  /// Sum of weights times h. Throws InvalidArgument on non-finite input.
  [[nodiscard]] double integrate(std::span<const double> h) const;
  /// Same integrand with the lower limit moved to node k (head at r_k).
  [[nodiscard]] double integrate_from(std::span<const double> h, std::size_t k) const;

 private:
  RadialGrid grid_;
  double n_;
  IntervalRule intervals_;
  std::vector<double> weights_;
};

/// Approximation of int_0^1 h r^{n-1} dr.
double integrate_radial(std::span<const double> h, const QuadratureRule& rule);

/// Discrete radially decreasing profile with flux w = r^{n-1}|u_r|^{p-2}u_r.
///
/// Invariants (checked on construction): u nonincreasing, w <= 0, and
/// u_r = -(-w r^{1-n})^{1/(p-1)} at every node.
class RadialProfile {
 public:
  static RadialProfile from_flux(RadialGrid grid, double n, double p, std::vector<double> u,
                                 std::vector<double> w);
  static RadialProfile from_slope(RadialGrid grid, double n, double p, std::vector<double> u,
                                  std::vector<double> u_r);
  /// All three fields as given (e.g. read back from CSV); consistency of
  /// u_r with w is checked to 1e-12 relative.
  static RadialProfile from_fields(RadialGrid grid, double n, double p, std::vector<double> u,
                                   std::vector<double> w, std::vector<double> u_r);

  [[nodiscard]] const RadialGrid& grid() const { return grid_; }
  [[nodiscard]] double n() const { return n_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] std::size_t size() const { return u_.size(); }
  [[nodiscard]] std::span<const double> u() const { return u_; }
  [[nodiscard]] std::span<const double> w() const { return w_; }
  [[nodiscard]] std::span<const double> u_r() const { return u_r_; }
  [[nodiscard]] bool non_integer_dimension() const;

  /// u(0) estimated from the startup series below r_min.
  [[nodiscard]] double center_value() const;

  /// Copy with u shifted so that u(1) = 0.
  [[nodiscard]] RadialProfile normalized() const;

 private:
  RadialProfile(RadialGrid grid, double n, double p, std::vector<double> u, std::vector<double> w,
                std::vector<double> u_r);
  void check_invariants() const;

  RadialGrid grid_;
  double n_;
  double p_;
  std::vector<double> u_;
  std::vector<double> w_;
  std::vector<double> u_r_;
};

/// u_r recovered from the flux: -(-w r^{1-n})^{1/(p-1)} (signed power).
double slope_from_flux(double w, double r, double n, double p);
/// w = r^{n-1}|u_r|^{p-2}u_r.
double flux_from_slope(double u_r, double r, double n, double p);

/// (1/p) int |u_r|^p - int G(u), in radial units.
double energy(const RadialProfile& profile, const std::function<double(double)>& G);
/// Same with G from the nonlinearity (Tabulated requires antiderivative nodes).
double energy(const RadialProfile& profile, const Nonlinearity& g);

}  // namespace plap
