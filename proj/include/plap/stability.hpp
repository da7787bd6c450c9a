#pragma once

// Second variation of the energy at a radial solution,
//   Q(xi) = int {(p-1)|u_r|^{p-2} xi_r^2 - g'(u) xi^2} r^{n-1} dr,
// its P1 discretization and minimal eigenvalue, and the identities and
// inequalities that follow from Q >= 0.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "plap/core.hpp"
#include "plap/field.hpp"

namespace plap {

using DerivativeFn = std::function<double(double)>;

/// Radial test function with value and r-derivative. Cheap to copy.
class TestFunction {
 public:
  enum class Kind { PowerCutoff, RScaled, SineMode, Hat, Zero };

  /// eps^{-alpha} - 1 on r <= eps, r^{-alpha} - 1 above.
  static TestFunction power_cutoff(double alpha, double eps);
  /// sin(j pi log r / log r_trunc) on [r_trunc, 1], zero below.
  static TestFunction sine_mode(int j, double r_trunc);
  /// P1 hat with peak 1 at `peak`, zero outside [left, right].
  static TestFunction hat(double left, double peak, double right);
  static TestFunction zero();
  /// r * eta(r).
  [[nodiscard]] TestFunction r_scaled() const;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string describe() const;
  [[nodiscard]] double value(double r) const;
  [[nodiscard]] double derivative(double r) const;
  /// Radii where the function has a kink; quadrature cells are split there.
  [[nodiscard]] std::vector<double> breakpoints() const;
  /// Below this radius the function vanishes identically (0 if it does not).
  [[nodiscard]] double support_lo() const;

 private:
  Kind kind_ = Kind::Zero;
  double a_ = 0.0;
  double b_ = 0.0;
  double c_ = 0.0;
  int j_ = 0;
  std::shared_ptr<const TestFunction> inner_;
};

/// Cells for integrals over [lo, 1]: `cells` log-spaced intervals, refined at
/// the given breakpoints.
std::vector<double> make_partition(double lo, std::size_t cells,
                                   std::span<const double> breakpoints = {});

/// int_{cells.front()}^{cells.back()} fn(r) dr by 8-point Gauss per cell.
double integrate_cells(std::span<const double> cells, const std::function<double(double)>& fn);

struct QuadratureOptions {
  /// Lower limit; 0 means the field's r_lo (or the test function's support).
  double lower = 0.0;
  std::size_t cells = 4096;
  /// Explicit cell boundaries; overrides lower/cells when non-empty.
  std::vector<double> partition;
};

/// Q(xi) in radial units over [lower, 1].
double Q_apply(const RadialField& field, const DerivativeFn& g_prime, const TestFunction& xi,
               const QuadratureOptions& options = {});

/// Tridiagonal P1 pencil on interior nodes of a log grid over [r_trunc, 1]:
/// A stiffness, B reaction, M plain weighted mass. Row i couples node i+1
/// with its neighbours; off-diagonals have one entry fewer.
struct TridiagonalPencil {
  std::vector<double> nodes;
  std::vector<double> a_diag, a_off;
  std::vector<double> b_diag, b_off;
  std::vector<double> m_diag, m_off;

  [[nodiscard]] std::size_t size() const { return a_diag.size(); }
  /// xi^T (A - B) xi for interior nodal values.
  [[nodiscard]] double quadratic_form(std::span<const double> xi) const;
};

/// Requires n_eig >= 32 and r_trunc >= field.r_lo().
TridiagonalPencil assemble_Q(const RadialField& field, const DerivativeFn& g_prime,
                             double r_trunc, std::size_t n_eig);

struct EigenResult {
  double mu_1 = 0.0;
  /// Certified bracket from inertia counts.
  double lower = 0.0;
  double upper = 0.0;
  double rayleigh = 0.0;
  /// max diagonal of M.
  double scale = 0.0;
  std::vector<double> vector;
  std::size_t bisections = 0;
};

/// Smallest mu with (A - B) x = mu M x: Sturm bisection on the diagonally
/// scaled pencil until the bracket is below 1e-10 max(scale, |mu|); the
/// eigenvector comes from inverse iteration and gives the Rayleigh quotient.
EigenResult min_eigenvalue(const TridiagonalPencil& pencil);

/// Number of eigenvalues of the pencil strictly below `shift`.
std::size_t count_below(const TridiagonalPencil& pencil, double shift);

enum class Verdict { SemiStable, Unstable, Marginal };
std::string verdict_name(Verdict verdict);

struct StabilityControls {
  double r_trunc = 1e-6;
  std::size_t n_eig = 512;
  double tol_eig = 1e-8;
  /// Also solve with r_trunc * 10 and report the shift.
  bool sensitivity = true;
};

struct StabilityReport {
  double mu_1 = 0.0;
  double mu_lower = 0.0;
  double mu_upper = 0.0;
  double rayleigh_min = 0.0;
  double scale = 0.0;
  Verdict verdict = Verdict::Marginal;
  double r_trunc = 0.0;
  std::size_t n_eig = 0;
  double tol_eig = 0.0;
  /// mu_1 with the truncation radius one decade larger (NaN if skipped).
  double mu_1_coarse_trunc = 0.0;
};

/// Semi-stable when mu_1 >= -tol*scale, unstable below -10 tol*scale,
/// marginal in between.
StabilityReport analyze_stability(const RadialField& field, const DerivativeFn& g_prime,
                                  const StabilityControls& controls = {});

struct IdentityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

/// int |u_r|^p {(p-1) eta_r^2 - (n-1) eta^2 / r^2} r^{n-1} dr. Uses only the
/// field, never the nonlinearity.
double lemma21_rhs(const RadialField& field, const TestFunction& eta,
                   const QuadratureOptions& options = {});

/// lhs = Q(u_r eta), rhs = lemma21_rhs, rel_err relative to
/// max(|lhs|, |rhs|, floor).
IdentityResult lemma21_identity(const RadialField& field, const DerivativeFn& g_prime,
                                const TestFunction& eta, const QuadratureOptions& options = {},
                                double floor = 1e-300);

/// Same on a computed profile; refuses (PreconditionFailed) unless the
/// profile's ODE residual is at most residual_bound.
IdentityResult lemma21_identity(const RadialProfile& profile, const Nonlinearity& g,
                                const TestFunction& eta, double residual_bound,
                                const QuadratureOptions& options = {});

struct HardyResult {
  std::string eta;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
};

/// (n-1) int |u_r|^p eta^2  <=  (p-1) int |u_r|^p ((r eta)_r)^2, checked as
/// lhs <= rhs (1 + 1e-8).
std::vector<HardyResult> hardy_inequality_check(const RadialField& field,
                                                std::span<const TestFunction> etas,
                                                const QuadratureOptions& options = {});

struct KeyEstimate {
  double lhs = 0.0;
  double gradient_p = 0.0;
  /// lhs ((n-1) - (alpha-1)^2 (p-1)) / int |u_r|^p.
  double implied_constant = 0.0;
};

/// int |u_r|^p r^{-2 alpha} r^{n-1} dr for 1 <= alpha < 1 + sqrt((n-1)/(p-1)).
KeyEstimate key_estimate_lhs(const RadialField& field, double alpha,
                             const QuadratureOptions& options = {});

}  // namespace plap
