#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version (the one the
// library calls) and a plain serial reference kept for tests and the
// benchmark. Reductions use a fixed block partition summed in block order,
// so results do not depend on the thread count.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace plap::kernels {

inline constexpr std::size_t kReductionBlock = 1024;

/// sum_i w_i h_i
double weighted_sum(std::span<const double> w, std::span<const double> h);
double weighted_sum_serial(std::span<const double> w, std::span<const double> h);

/// Four-point product weights per interval for int_{x_i}^{x_{i+1}} h(r) r^k dr.
/// start[i] is the first stencil node (clamped at the ends).
void interval_weights(std::span<const double> nodes, double weight_power,
                      std::span<std::size_t> start, std::span<std::array<double, 4>> weights);
void interval_weights_serial(std::span<const double> nodes, double weight_power,
                             std::span<std::size_t> start,
                             std::span<std::array<double, 4>> weights);

/// Sixth-order centred derivative d/ds of values sampled with uniform step
/// in s. Entries closer than 3 nodes to either end are set to NaN.
void centered_derivative(std::span<const double> values, double step, std::span<double> out);
void centered_derivative_serial(std::span<const double> values, double step,
                                std::span<double> out);

/// out[i] = fn(in[i]). fn must be safe to call concurrently. The first
/// exception thrown by fn is rethrown after the loop.
void transform(std::span<const double> in, std::span<double> out,
               const std::function<double(double)>& fn);
void transform_serial(std::span<const double> in, std::span<double> out,
                      const std::function<double(double)>& fn);

/// Coefficients (stiffness, reaction, mass) at a point, weight included.
using CellCoefficients = std::function<std::array<double, 3>(double r)>;

/// Element matrices for P1 hats on each cell [x_e, x_{e+1}]: for each of the
/// three forms, (K_00, K_01, K_11). Integrated with 8-point Gauss-Legendre.
struct ElementMatrices {
  std::array<double, 3> stiffness;
  std::array<double, 3> reaction;
  std::array<double, 3> mass;
};
void element_matrices(std::span<const double> cells, const CellCoefficients& coeff,
                      std::span<ElementMatrices> out);
void element_matrices_serial(std::span<const double> cells, const CellCoefficients& coeff,
                             std::span<ElementMatrices> out);

}  // namespace plap::kernels
