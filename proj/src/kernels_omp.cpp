#include <exception>
#include <vector>

#include <omp.h>

#include "kernels_detail.hpp"
#include "plap/kernels.hpp"

namespace plap::kernels {

namespace {

// Below this many elements the loops stay on the calling thread.
constexpr std::ptrdiff_t kParallelThreshold = 4096;

}  // namespace

double weighted_sum(std::span<const double> w, std::span<const double> h) {
  const std::size_t count = w.size();
  const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  if (blocks <= 1) return weighted_sum_serial(w, h);

  std::vector<double> partial(blocks, 0.0);
  const auto nblocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(count) > kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(count, lo + kReductionBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += w[i] * h[i];
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

void interval_weights(std::span<const double> nodes, double weight_power,
                      std::span<std::size_t> start, std::span<std::array<double, 4>> weights) {
  const auto intervals = static_cast<std::ptrdiff_t>(nodes.size() - 1);
#pragma omp parallel for schedule(static) if (intervals > kParallelThreshold / 8)
  for (std::ptrdiff_t i = 0; i < intervals; ++i) {
    const auto k = static_cast<std::size_t>(i);
    detail::interval_stencil(nodes, weight_power, k, start[k], weights[k]);
  }
}

void centered_derivative(std::span<const double> values, double step, std::span<double> out) {
  const auto count = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(static) if (count > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = detail::centered6(values, step, static_cast<std::size_t>(i));
  }
}

void transform(std::span<const double> in, std::span<double> out,
               const std::function<double(double)>& fn) {
  const auto count = static_cast<std::ptrdiff_t>(in.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (count > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(in[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(plap_transform_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void element_matrices(std::span<const double> cells, const CellCoefficients& coeff,
                      std::span<ElementMatrices> out) {
  const auto count = static_cast<std::ptrdiff_t>(cells.size()) - 1;
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (count > kParallelThreshold / 16)
  for (std::ptrdiff_t e = 0; e < count; ++e) {
    const auto k = static_cast<std::size_t>(e);
    try {
      out[k] = detail::element(cells[k], cells[k + 1], coeff);
    } catch (...) {
#pragma omp critical(plap_element_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace plap::kernels
