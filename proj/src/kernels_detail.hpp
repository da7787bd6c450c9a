#pragma once

// Per-element bodies shared by the serial and OpenMP kernel loops.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "gauss.hpp"
#include "plap/kernels.hpp"

namespace plap::kernels::detail {

inline void interval_stencil(std::span<const double> x, double k, std::size_t i,
                             std::size_t& start, std::array<double, 4>& w) {
  const std::size_t count = x.size();
  const std::size_t j0 = std::min(i == 0 ? std::size_t{0} : i - 1, count - 4);
  start = j0;
  w = {0.0, 0.0, 0.0, 0.0};
  const auto& rule = plap::detail::gauss_rule<10>();
  rule.apply(x[i], x[i + 1], [&](double r, double qw) {
    const double weight = qw * std::pow(r, k);
    for (std::size_t c = 0; c < 4; ++c) {
      double basis = 1.0;
      for (std::size_t j = 0; j < 4; ++j) {
        if (j == c) continue;
        basis *= (r - x[j0 + j]) / (x[j0 + c] - x[j0 + j]);
      }
      w[c] += weight * basis;
    }
  });
}

inline double centered6(std::span<const double> v, double step, std::size_t i) {
  if (i < 3 || i + 3 >= v.size()) return std::numeric_limits<double>::quiet_NaN();
  return (-v[i - 3] + 9.0 * v[i - 2] - 45.0 * v[i - 1] + 45.0 * v[i + 1] - 9.0 * v[i + 2] +
          v[i + 3]) /
         (60.0 * step);
}

inline ElementMatrices element(double a, double b, const CellCoefficients& coeff) {
  ElementMatrices m{};
  const double len = b - a;
  const double inv_len2 = 1.0 / (len * len);
  const auto& rule = plap::detail::gauss_rule<8>();
  rule.apply(a, b, [&](double r, double qw) {
    const auto c = coeff(r);
    const double phi0 = (b - r) / len;
    const double phi1 = (r - a) / len;
    m.stiffness[0] += qw * c[0] * inv_len2;
    m.stiffness[1] -= qw * c[0] * inv_len2;
    m.stiffness[2] += qw * c[0] * inv_len2;
    m.reaction[0] += qw * c[1] * phi0 * phi0;
    m.reaction[1] += qw * c[1] * phi0 * phi1;
    m.reaction[2] += qw * c[1] * phi1 * phi1;
    m.mass[0] += qw * c[2] * phi0 * phi0;
    m.mass[1] += qw * c[2] * phi0 * phi1;
    m.mass[2] += qw * c[2] * phi1 * phi1;
  });
  return m;
}

}  // namespace plap::kernels::detail
