#include <doctest.h>

#include <cmath>
#include <variant>

#include "plap/oracle.hpp"
#include "plap/solver.hpp"

using namespace plap;

namespace {

// Minimal Liouville solution on the unit disk at lambda = 1:
// u = 2 log((1+b)/(1+b r^2)) with 8b/(1+b)^2 = 1, b = 3 - 2 sqrt 2.
const double kDiskB = 3.0 - 2.0 * std::sqrt(2.0);
double disk_u(double r) { return 2.0 * std::log((1.0 + kDiskB) / (1.0 + kDiskB * r * r)); }

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("minimal solution on the disk matches the closed form") {
    const auto grid = make_grid(1e-8, 2000);
    const ProblemSpec spec{2, 2, Nonlinearity::exponential(1.0)};
    auto outcome = minimal_iterate(spec, grid);
    REQUIRE(std::holds_alternative<MinimalSolution>(outcome));
    const auto& solution = std::get<MinimalSolution>(outcome);
    CHECK(solution.center_value == doctest::Approx(0.31669436764074988).epsilon(1e-9));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(solution.profile.u()[i] - disk_u(grid[i])));
    }
    CHECK(worst < 1e-9);
    CHECK(ode_residual(solution.profile, spec.nonlinearity) < 1e-8);

    // A warm start from a smaller lambda reaches the same solution.
    auto lower = minimal_iterate(spec.with_lambda(0.5), grid);
    const auto& start = std::get<MinimalSolution>(lower).profile;
    auto warm = minimal_iterate(spec, grid, {}, &start);
    const auto& warm_solution = std::get<MinimalSolution>(warm);
    CHECK(warm_solution.iterations < solution.iterations);
    for (std::size_t i = 0; i < grid.size(); i += 100) {
      CHECK(warm_solution.profile.u()[i] == doctest::Approx(solution.profile.u()[i]).epsilon(1e-10));
    }
  }

  TEST_CASE("iteration diverges above lambda*") {
    const auto grid = make_grid(1e-8, 1000);
    auto outcome = minimal_iterate(ProblemSpec{2, 2, Nonlinearity::exponential(3.0)}, grid);
    REQUIRE(std::holds_alternative<Divergence>(outcome));
    CHECK_FALSE(std::get<Divergence>(outcome).reason.empty());
  }

  TEST_CASE("lambda* of the one-dimensional problem") {
    // 2c^2/cosh^2 c at c tanh c = 1: 0.87845767978129030 (mpmath).
    const auto grid = make_grid(1e-8, 2000);
    const auto result = lambda_star_estimate(ProblemSpec{1, 2, Nonlinearity::exponential()}, grid);
    CHECK(result.lambda_lo <= 0.87845767978129030 * (1.0 + 1e-6));
    CHECK(result.lambda_hi >= 0.87845767978129030 * (1.0 - 1e-6));
    CHECK((result.lambda_hi - result.lambda_lo) / result.lambda_hi < 1e-3);
    CHECK(result.lower_profile.has_value());
    for (std::size_t i = 1; i < result.records.size(); ++i) {
      CHECK(result.records[i - 1].lambda < result.records[i].lambda);
    }
  }

  TEST_CASE("lambda* search without blow-up") {
    // Constant f on [0, 3]: iterates leave the table before anything blows up.
    const auto grid = make_grid(1e-8, 400);
    std::vector<TableNode> flat = {{0, 1, 0, std::nullopt}, {1, 1, 0, std::nullopt},
                                   {2, 1, 0, std::nullopt}, {3, 1, 0, std::nullopt}};
    CHECK_THROWS_AS(lambda_star_estimate(ProblemSpec{2, 2, Nonlinearity::tabulated(flat)}, grid),
                    NoDivergence);
  }

  TEST_CASE("W1p norm of the exact exponential solution") {
    // (int 4 log^2 r r^11 + int 4 r^9)^{1/2} = 0.63610504606521526 (mpmath).
    const auto grid = make_grid(1e-8, 2000);
    const auto profile = exact_exponential(12, 2).sample(grid);
    CHECK(w1p_norm(profile, QuadratureRule(grid, 12)) ==
          doctest::Approx(0.63610504606521526).epsilon(1e-8));
  }

  TEST_CASE("shooting reproduces the disk solution") {
    const auto grid = make_grid(1e-8, 2000);
    const ProblemSpec spec{2, 2, Nonlinearity::exponential(1.0)};
    const auto shot = shoot(spec, disk_u(0.0), grid);
    CHECK(std::abs(shot.boundary_value) < 1e-9);
    REQUIRE(shot.profile.has_value());
    CHECK(shot.series_radius <= grid.r_min());
    for (std::size_t i = 0; i < grid.size(); i += 50) {
      CHECK(shot.u[i] == doctest::Approx(disk_u(grid[i])).epsilon(1e-9));
    }
  }

  TEST_CASE("shooting with a large centre approaches the singular solution") {
    // The regular solution with u(0) = M differs from -2 log r only inside
    // its core radius ~ e^{-M/2}.
    const auto grid = make_grid(1e-8, 2000);
    const auto exact = exact_exponential(12, 2);
    const auto shot = shoot(exact.problem(), 60.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < 1e-5) continue;
      CHECK(std::abs(shot.u[i] - exact.u(grid[i])) < 1e-6);
    }
  }

  TEST_CASE("branch points follow 8b/(1+b)^2") {
    const auto grid = make_grid(1e-8, 2000);
    const ProblemSpec spec{2, 2, Nonlinearity::exponential()};
    const std::vector<double> centres = {0.2, 0.8, 1.5, 2.5, 4.0};
    const auto curve = bifurcation_curve(spec, centres, grid);
    REQUIRE(curve.size() == centres.size());
    for (const auto& point : curve) {
      const double b = std::exp(point.center / 2.0) - 1.0;
      CHECK(point.converged);
      CHECK(point.lambda == doctest::Approx(8.0 * b / ((1.0 + b) * (1.0 + b))).epsilon(1e-7));
    }
    CHECK_THROWS_AS(bifurcation_curve(spec, {1.0, 0.5}, grid), InvalidArgument);
    CHECK(solve_branch_point(spec, disk_u(0.0), grid).lambda == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("extremal profile on the disk stops at the fold") {
    const auto grid = make_grid(1e-8, 2000);
    const auto result = lambda_star_estimate(ProblemSpec{2, 2, Nonlinearity::exponential()}, grid);
    const auto extremal = extremal_profile(result);
    CHECK(extremal.stop == ExtremalProfile::Stop::Fold);
    CHECK(extremal.lambda == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(extremal.center == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-3));
    for (std::size_t i = 0; i + 1 < grid.size(); i += 40) {
      const double exact = 2.0 * std::log(2.0 / (1.0 + grid[i] * grid[i]));
      CHECK(extremal.profile.u()[i] == doctest::Approx(exact).epsilon(1e-5));
    }
  }

  TEST_CASE("extremal profile above the critical dimension is singular") {
    const auto grid = make_grid(1e-8, 2000);
    const auto result =
        lambda_star_estimate(ProblemSpec{12, 2, Nonlinearity::exponential()}, grid);
    const auto extremal = extremal_profile(result);
    CHECK(extremal.stop == ExtremalProfile::Stop::Singular);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < 1e-4 || grid[i] > 0.5) continue;
      CHECK(extremal.profile.u()[i] == doctest::Approx(-2.0 * std::log(grid[i])).epsilon(1e-6));
    }
  }
}
