#include "plap/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace plap {

struct SplineField::Splines {
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  Spline u;
  Spline u_r;
};

SplineField::SplineField(const RadialProfile& profile)
    : n_(profile.n()), p_(profile.p()), r_lo_(profile.grid().r_min()) {
  const double s0 = std::log(profile.grid().r_min());
  const double h = profile.grid().log_step();
  const auto u = profile.u();
  const auto u_r = profile.u_r();
  splines_ = std::make_unique<Splines>(Splines{
      Splines::Spline(u.begin(), u.end(), s0, h),
      Splines::Spline(u_r.begin(), u_r.end(), s0, h),
  });
}

SplineField::~SplineField() = default;
SplineField::SplineField(SplineField&&) noexcept = default;
SplineField& SplineField::operator=(SplineField&&) noexcept = default;

namespace {

double log_radius(double r, double r_lo) {
  // Small relative slack absorbs rounding of partition endpoints.
  if (!(r >= r_lo * (1.0 - 1e-12) && r <= 1.0 + 1e-12)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "radius %.6g outside the profile range [%.6g, 1]", r, r_lo);
    throw InvalidArgument(buf);
  }
  return std::clamp(std::log(r), std::log(r_lo), 0.0);
}

}  // namespace

double SplineField::u(double r) const { return splines_->u(log_radius(r, r_lo_)); }

double SplineField::u_r(double r) const { return splines_->u_r(log_radius(r, r_lo_)); }

double SplineField::u_rr(double r) const {
  // d/dr = (1/r) d/ds
  return splines_->u_r.prime(log_radius(r, r_lo_)) / r;
}

}  // namespace plap
