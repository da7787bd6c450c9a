#include <doctest.h>

#include <cmath>

#include "plap/oracle.hpp"

using namespace plap;

TEST_SUITE("oracle") {
  TEST_CASE("exponential family") {
    const auto e12 = exact_exponential(12, 2);
    CHECK(e12.lambda_star() == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(e12.singularity_exponent() == 0.0);
    CHECK(e12.u(0.5) == doctest::Approx(-2.0 * std::log(0.5)));
    CHECK(e12.u_r(0.5) == doctest::Approx(-4.0));
    CHECK(e12.u_rr(0.5) == doctest::Approx(8.0));
    CHECK(e12.nonlinearity().g(0.0) == doctest::Approx(20.0));
    CHECK(exact_exponential(10, 3).lambda_star() == doctest::Approx(63.0).epsilon(1e-15));
    CHECK(exact_exponential(7, 1.5).lambda_star() ==
          doctest::Approx(6.7360967926537398).epsilon(1e-14));
    CHECK_THROWS_AS((void)e12.m(), InvalidArgument);
    CHECK_THROWS_AS(exact_exponential(2, 2), InvalidArgument);
  }

  TEST_CASE("power family") {
    const auto pw = exact_power(15, 2, 5);
    CHECK(pw.lambda_star() == doctest::Approx(6.25).epsilon(1e-15));
    CHECK(pw.singularity_exponent() == doctest::Approx(0.5));
    CHECK(pw.u(0.25) == doctest::Approx(1.0));
    CHECK(pw.u_r(0.25) == doctest::Approx(-0.5 * std::pow(0.25, -1.5)));
    CHECK(pw.m() == 5.0);
    CHECK_THROWS_AS(exact_power(15, 2, 1), InvalidArgument);
    // lambda* <= 0 when n <= m p / (m - (p-1)).
    CHECK_THROWS_AS(exact_power(2, 2, 5), InvalidArgument);
  }

  TEST_CASE("samples satisfy the flux-form equation") {
    const auto grid = make_grid(1e-8, 4000);
    for (const auto& exact : {exact_exponential(12, 2), exact_power(15, 2, 5),
                              exact_exponential(20, 3)}) {
      const auto profile = exact.sample(grid);
      CHECK(profile.u()[1000] == doctest::Approx(exact.u(grid[1000])).epsilon(1e-15));
      CHECK(ode_residual(profile, exact.nonlinearity()) < 1e-8);
    }
  }

  TEST_CASE("residual converges at high order") {
    const auto exact = exact_power(15, 2, 5);
    const double coarse = ode_residual(exact.sample(make_grid(1e-8, 500)), exact.nonlinearity());
    const double fine = ode_residual(exact.sample(make_grid(1e-8, 1000)), exact.nonlinearity());
    CHECK(std::log2(coarse / fine) > 4.0);
  }

  TEST_CASE("residual detects a wrong parameter") {
    const auto exact = exact_exponential(12, 2);
    const auto profile = exact.sample(make_grid(1e-8, 2000));
    CHECK(ode_residual(profile, Nonlinearity::exponential(21.0)) > 1e-2);
  }
}
