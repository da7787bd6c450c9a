#pragma once

#include <array>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace plap::detail {

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
template <std::size_t K>
struct GaussRule {
  std::array<double, K> x{};
  std::array<double, K> w{};

  GaussRule() {
    using G = boost::math::quadrature::gauss<double, K>;
    const auto& a = G::abscissa();
    const auto& b = G::weights();
    // boost stores the nonnegative half; for odd K index 0 is the midpoint.
    std::size_t idx = 0;
    for (std::size_t j = a.size(); j-- > 0;) {
      if (a[j] == 0.0) continue;
      x[idx] = -a[j];
      w[idx] = b[j];
      ++idx;
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
      x[idx] = a[j];
      w[idx] = b[j];
      ++idx;
    }
  }

  /// Maps onto [lo, hi]: calls fn(point, weight).
  template <typename Fn>
  void apply(double lo, double hi, Fn&& fn) const {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < K; ++q) fn(mid + half * x[q], half * w[q]);
  }
};

template <std::size_t K>
const GaussRule<K>& gauss_rule() {
  static const GaussRule<K> rule;
  return rule;
}

}  // namespace plap::detail
