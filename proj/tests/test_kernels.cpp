#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <omp.h>

#include "plap/core.hpp"
#include "plap/kernels.hpp"

using namespace plap;

namespace {

std::vector<double> random_vector(std::size_t size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> v(size);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("weighted sum: matches serial and ignores the thread count") {
    for (std::size_t size : {0u, 1u, 1023u, 1024u, 1025u, 100000u}) {
      const auto w = random_vector(size, 1);
      const auto h = random_vector(size, 2);
      double magnitude = 0.0;
      for (std::size_t i = 0; i < size; ++i) magnitude += std::abs(w[i] * h[i]);
      const double parallel = kernels::weighted_sum(w, h);
      CHECK(std::abs(parallel - kernels::weighted_sum_serial(w, h)) <= 1e-14 * magnitude);
      const int saved = omp_get_max_threads();
      for (int threads : {1, 2, 3, 8}) {
        omp_set_num_threads(threads);
        CHECK(kernels::weighted_sum(w, h) == parallel);
      }
      omp_set_num_threads(saved);
    }
  }

  TEST_CASE("interval weights: OpenMP equals serial") {
    const auto grid = make_grid(1e-8, 3000);
    const std::size_t intervals = grid.size() - 1;
    for (double k : {0.0, 1.0, 11.0, 2.5}) {
      std::vector<std::size_t> s1(intervals), s2(intervals);
      std::vector<std::array<double, 4>> w1(intervals), w2(intervals);
      kernels::interval_weights(grid.nodes(), k, s1, w1);
      kernels::interval_weights_serial(grid.nodes(), k, s2, w2);
      CHECK(s1 == s2);
      CHECK(w1 == w2);
    }
  }

  TEST_CASE("centred derivative: agreement and sixth-order accuracy") {
    const std::size_t size = 801;
    const double step = 0.01;
    std::vector<double> values(size);
    for (std::size_t i = 0; i < size; ++i) values[i] = std::sin(step * static_cast<double>(i));
    std::vector<double> a(size), b(size);
    kernels::centered_derivative(values, step, a);
    kernels::centered_derivative_serial(values, step, b);
    for (std::size_t i = 0; i < size; ++i) {
      if (i < 3 || i + 3 >= size) {
        CHECK(std::isnan(a[i]));
        continue;
      }
      CHECK(a[i] == b[i]);
      CHECK(std::abs(a[i] - std::cos(step * static_cast<double>(i))) < 1e-12);
    }
  }

  TEST_CASE("transform: agreement and exception propagation") {
    const auto in = random_vector(5000, 3);
    std::vector<double> a(in.size()), b(in.size());
    auto fn = [](double x) { return std::exp(-x * x) + x; };
    kernels::transform(in, a, fn);
    kernels::transform_serial(in, b, fn);
    CHECK(a == b);
    auto throwing = [](double x) -> double {
      if (x > 2.5) throw std::runtime_error("boom");
      return x;
    };
    CHECK_THROWS_AS(kernels::transform(in, a, throwing), std::runtime_error);
  }

  TEST_CASE("element matrices: agreement and exact mass for constant weight") {
    std::vector<double> cells(257);
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = 0.5 + 0.5 * i / 256.0;
    const kernels::CellCoefficients coeff = [](double r) {
      return std::array<double, 3>{r * r, std::sin(r), 1.0};
    };
    std::vector<kernels::ElementMatrices> a(cells.size() - 1), b(cells.size() - 1);
    kernels::element_matrices(cells, coeff, a);
    kernels::element_matrices_serial(cells, coeff, b);
    for (std::size_t e = 0; e < a.size(); ++e) {
      CHECK(a[e].stiffness == b[e].stiffness);
      CHECK(a[e].reaction == b[e].reaction);
      CHECK(a[e].mass == b[e].mass);
      const double h = cells[e + 1] - cells[e];
      // P1 mass with unit weight: h/3, h/6, h/3.
      CHECK(a[e].mass[0] == doctest::Approx(h / 3.0).epsilon(1e-13));
      CHECK(a[e].mass[1] == doctest::Approx(h / 6.0).epsilon(1e-13));
      CHECK(a[e].mass[2] == doctest::Approx(h / 3.0).epsilon(1e-13));
    }
  }
}
