#pragma once

// Continuous evaluation of a radial solution: u, u_r and u_rr at any r in
// [r_lo, 1]. Used wherever integrands are sampled off the profile nodes
// (quadratic forms, test-function integrals).

#include <memory>

#include "plap/core.hpp"

namespace plap {

class RadialField {
 public:
  virtual ~RadialField() = default;
  [[nodiscard]] virtual double n() const = 0;
  [[nodiscard]] virtual double p() const = 0;
  /// Smallest radius at which the field may be evaluated.
  [[nodiscard]] virtual double r_lo() const = 0;
  [[nodiscard]] virtual double u(double r) const = 0;
  [[nodiscard]] virtual double u_r(double r) const = 0;
  [[nodiscard]] virtual double u_rr(double r) const = 0;
};

/// Cubic B-splines in s = log r through the profile's u and u_r values.
/// Power laws keep a uniform relative accuracy on the log grid.
class SplineField final : public RadialField {
 public:
  explicit SplineField(const RadialProfile& profile);
  ~SplineField() override;
  SplineField(SplineField&&) noexcept;
  SplineField& operator=(SplineField&&) noexcept;

  [[nodiscard]] double n() const override { return n_; }
  [[nodiscard]] double p() const override { return p_; }
  [[nodiscard]] double r_lo() const override { return r_lo_; }
  [[nodiscard]] double u(double r) const override;
  [[nodiscard]] double u_r(double r) const override;
  [[nodiscard]] double u_rr(double r) const override;

 private:
  struct Splines;
  double n_;
  double p_;
  double r_lo_;
  std::unique_ptr<Splines> splines_;
};

}  // namespace plap
