#include <cmath>
#include <limits>

#include "gauss.hpp"
#include "kernels_detail.hpp"
#include "plap/kernels.hpp"

namespace plap::kernels {

double weighted_sum_serial(std::span<const double> w, std::span<const double> h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * h[i];
  return acc;
}

void interval_weights_serial(std::span<const double> nodes, double weight_power,
                             std::span<std::size_t> start,
                             std::span<std::array<double, 4>> weights) {
  const std::size_t intervals = nodes.size() - 1;
  for (std::size_t i = 0; i < intervals; ++i) {
    detail::interval_stencil(nodes, weight_power, i, start[i], weights[i]);
  }
}

void centered_derivative_serial(std::span<const double> values, double step,
                                std::span<double> out) {
  const std::size_t count = values.size();
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = detail::centered6(values, step, i);
  }
}

void transform_serial(std::span<const double> in, std::span<double> out,
                      const std::function<double(double)>& fn) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
}

void element_matrices_serial(std::span<const double> cells, const CellCoefficients& coeff,
                             std::span<ElementMatrices> out) {
  for (std::size_t e = 0; e + 1 < cells.size(); ++e) {
    out[e] = detail::element(cells[e], cells[e + 1], coeff);
  }
}

}  // namespace plap::kernels
