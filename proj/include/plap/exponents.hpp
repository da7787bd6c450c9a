#pragma once

// Critical dimension, the integrability exponents q_0, q_1, the critical
// power m_cs, and the three-way dimension regime for semi-stable radial
// solutions of -Delta_p u = g(u).

#include <string>

#include "plap/core.hpp"

namespace plap {

enum class Regime {
  Bounded,     ///< n < p + 4p/(p-1): u in L^infinity
  Critical,    ///< n = p + 4p/(p-1): u in every L^q, log pointwise bound
  Supercritical///< n > p + 4p/(p-1): u in L^q for q < q_0
};

/// "A", "B" or "C".
std::string regime_letter(Regime regime);

/// Relative tolerance for the n == critical_dimension(p) comparison.
inline constexpr double kRegimeTolerance = 1e-12;

/// p + 4p/(p-1). InvalidArgument when p <= 1.
double critical_dimension(double p);

/// q_k for k in {0, 1}; +infinity below the critical dimension, and also
/// when the defining reciprocal is not positive.
ExtendedReal q_exponent(double n, double p, int k);

/// Critical power exponent for f = (1+u)^m; +infinity for n <= critical.
ExtendedReal m_cs(double n, double p);

/// |n (m_cs - (p-1)) / p - q_0| / q_0. RegimeMismatch unless n > critical.
double consistency_q0_mcs(double n, double p);

Regime classify(double n, double p);

/// Power of r in the pointwise bound on u for n > critical:
/// (1/p)(n - 2 sqrt((n-1)/(p-1)) - p - 2).
double pointwise_exponent(double n, double p);
/// Power of r in the gradient bound on B_{1/4}:
/// (1/p)(n - 2 sqrt((n-1)/(p-1)) - 2).
double gradient_exponent(double n, double p);

struct ExponentReport {
  double n = 0.0;
  double p = 0.0;
  double critical_dimension = 0.0;
  ExtendedReal q0;
  ExtendedReal q1;
  ExtendedReal m_cs;
  Regime regime = Regime::Bounded;
  bool non_integer_dimension = false;
  /// Human-readable statement of the bound that applies in this regime.
  std::string summary;
};

ExponentReport classify_regime(double n, double p);

}  // namespace plap
