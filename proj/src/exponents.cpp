#include "plap/exponents.hpp"

#include <cmath>
#include <cstdio>

namespace plap {

namespace {

void validate(double n, double p) { ProblemSpec{n, p}.validate(); }

// Hardy-type root sqrt((n-1)/(p-1)) that appears in every exponent.
double hardy_root(double n, double p) { return std::sqrt((n - 1.0) / (p - 1.0)); }

}  // namespace

std::string regime_letter(Regime regime) {
  switch (regime) {
    case Regime::Bounded:
      return "A";
    case Regime::Critical:
      return "B";
    case Regime::Supercritical:
      return "C";
  }
  return "?";
}

double critical_dimension(double p) {
  if (!std::isfinite(p) || p <= 1.0) throw InvalidArgument("exponent p must be > 1");
  return p + 4.0 * p / (p - 1.0);
}

Regime classify(double n, double p) {
  validate(n, p);
  const double crit = critical_dimension(p);
  if (std::abs(n - crit) <= kRegimeTolerance * crit) return Regime::Critical;
  return n < crit ? Regime::Bounded : Regime::Supercritical;
}

ExtendedReal q_exponent(double n, double p, int k) {
  validate(n, p);
  if (k != 0 && k != 1) throw InvalidArgument("q_exponent: k must be 0 or 1");
  const Regime regime = classify(n, p);
  if (regime == Regime::Bounded) return ExtendedReal::infinity();
  // At the critical dimension the q_0 reciprocal vanishes identically.
  if (regime == Regime::Critical && k == 0) return ExtendedReal::infinity();
  const double reciprocal = 1.0 / p - 2.0 / (n * p) * hardy_root(n, p) + (k - 1.0) / n -
                            2.0 / (n * p);
  if (!(reciprocal > 0.0)) return ExtendedReal::infinity();
  return ExtendedReal(1.0 / reciprocal);
}

ExtendedReal m_cs(double n, double p) {
  validate(n, p);
  if (classify(n, p) != Regime::Supercritical) return ExtendedReal::infinity();
  const double numerator = (p - 1.0) * n - 2.0 * std::sqrt((p - 1.0) * (n - 1.0)) + 2.0 - p;
  const double denominator = n - (p + 2.0) - 2.0 * hardy_root(n, p);
  return ExtendedReal(numerator / denominator);
}

double consistency_q0_mcs(double n, double p) {
  validate(n, p);
  if (classify(n, p) != Regime::Supercritical) {
    throw RegimeMismatch("q0/m_cs identity needs n > p + 4p/(p-1)");
  }
  const double q0 = q_exponent(n, p, 0).value();
  const double m = m_cs(n, p).value();
  return std::abs(n * (m - (p - 1.0)) / p - q0) / q0;
}

double pointwise_exponent(double n, double p) {
  validate(n, p);
  return (n - 2.0 * hardy_root(n, p) - p - 2.0) / p;
}

double gradient_exponent(double n, double p) {
  validate(n, p);
  return (n - 2.0 * hardy_root(n, p) - 2.0) / p;
}

ExponentReport classify_regime(double n, double p) {
  ExponentReport report;
  report.n = n;
  report.p = p;
  report.critical_dimension = critical_dimension(p);
  report.regime = classify(n, p);
  report.q0 = q_exponent(n, p, 0);
  report.q1 = q_exponent(n, p, 1);
  report.m_cs = m_cs(n, p);
  report.non_integer_dimension = n != std::floor(n);

  char buf[512];
  switch (report.regime) {
    case Regime::Bounded:
      std::snprintf(buf, sizeof buf,
                    "n = %.6g < %.6g: every semi-stable radially decreasing W^{1,p} solution is "
                    "bounded, |u|_inf <= C(n,p) |u|_{W^{1,p}}.",
                    n, report.critical_dimension);
      break;
    case Regime::Critical:
      std::snprintf(buf, sizeof buf,
                    "n = %.6g = p + 4p/(p-1): u in L^q for all q < inf and "
                    "|u(r)| <= C(p) |u|_{W^{1,p}} (|log r| + 1); W^{1,q} for q < q1 = %s.",
                    n, report.q1.str().c_str());
      break;
    case Regime::Supercritical:
      std::snprintf(buf, sizeof buf,
                    "n = %.6g > %.6g: u in L^q for q < q0 = %s, W^{1,q} for q < q1 = %s, "
                    "|u(r)| <= C r^{-%.10g} (|log r|^{1/p} + 1).",
                    n, report.critical_dimension, report.q0.str().c_str(), report.q1.str().c_str(),
                    pointwise_exponent(n, p));
      break;
  }
  report.summary = buf;
  if (report.non_integer_dimension) report.summary += " (non-integer dimension)";
  return report;
}

}  // namespace plap
