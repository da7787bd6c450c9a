#include <doctest.h>

#include <cmath>
#include <vector>

#include "plap/core.hpp"

using namespace plap;

TEST_SUITE("core") {
  TEST_CASE("grid is log-uniform with exact endpoints") {
    const auto grid = make_grid(1e-8, 2000);
    CHECK(grid.size() == 2000);
    CHECK(grid.r_min() == 1e-8);
    CHECK(grid[1999] == 1.0);
    const double step = grid.log_step();
    CHECK(step == doctest::Approx(std::log(1e8) / 1999).epsilon(1e-14));
    for (std::size_t i = 1; i < grid.size(); ++i) {
      CHECK(std::log(grid[i] / grid[i - 1]) == doctest::Approx(step).epsilon(1e-9));
    }
    CHECK_THROWS_AS(make_grid(1e-8, 15), InvalidArgument);
    CHECK_THROWS_AS(make_grid(1.0, 100), InvalidArgument);
    CHECK_THROWS_AS(make_grid(0.0, 100), InvalidArgument);
  }

  TEST_CASE("quadrature integrates cubics times r^(n-1) exactly") {
    const std::vector<double> coeff = {0.7, -1.3, 2.1, 0.4};
    for (double n : {1.0, 2.0, 2.5, 5.0, 12.0}) {
      const auto grid = make_grid(1e-6, 400);
      const QuadratureRule rule(grid, n);
      std::vector<double> h(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        h[i] = coeff[0] + r * (coeff[1] + r * (coeff[2] + r * coeff[3]));
      }
      double exact = 0.0;
      for (std::size_t j = 0; j < coeff.size(); ++j) exact += coeff[j] / (static_cast<double>(j) + n);
      // The head [0, r_min] treats h as constant: error O(r_min^{n+1}).
      const double head_error = 2.0 * std::pow(1e-6, n + 1.0);
      CHECK(std::abs(rule.integrate(h) - exact) <= 1e-13 + head_error);
    }
  }

  TEST_CASE("quadrature weights are positive") {
    for (double n : {1.0, 2.0, 3.5, 12.0}) {
      const QuadratureRule rule(make_grid(1e-8, 2000), n);
      for (double w : rule.weights()) REQUIRE(w > 0.0);
    }
  }

  TEST_CASE("quadrature of a log-weighted integrand") {
    // int_{1e-8}^1 r^2 log(r)^2 dr = 0.074074074074074074073957 (mpmath); the
    // head adds h(r_min) r_min^3 / 3.
    const auto grid = make_grid(1e-8, 2000);
    const QuadratureRule rule(grid, 3.0);
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) h[i] = std::pow(std::log(grid[i]), 2);
    const double head = std::pow(std::log(1e-8), 2) * 1e-24 / 3.0;
    const double exact = 0.074074074074074074073957 + head;
    CHECK(rule.integrate(h) == doctest::Approx(exact).epsilon(1e-7));
    CHECK(rule.integrate_from(h, 0) == doctest::Approx(rule.integrate(h)).epsilon(1e-15));

    // Fourth order: halving the log step cuts the error by about 16.
    auto error = [&](std::size_t count) {
      const auto g = make_grid(1e-8, count);
      std::vector<double> v(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::pow(std::log(g[i]), 2);
      return std::abs(QuadratureRule(g, 3.0).integrate(v) - exact);
    };
    CHECK(std::log2(error(500) / error(1000)) > 3.5);
  }

  TEST_CASE("non-finite integrands are rejected") {
    const auto grid = make_grid(1e-4, 64);
    const QuadratureRule rule(grid, 2.0);
    std::vector<double> h(grid.size(), 1.0);
    h[10] = NAN;
    CHECK_THROWS_AS((void)rule.integrate(h), InvalidArgument);
  }

  TEST_CASE("extended reals") {
    const auto inf = ExtendedReal::infinity();
    CHECK_FALSE(inf.is_finite());
    CHECK_THROWS_AS((void)inf.value(), InvalidArgument);
    CHECK(std::isinf(inf.as_double()));
    CHECK(ExtendedReal(2.5).value() == 2.5);
    CHECK(ExtendedReal(2.5) != inf);
  }

  TEST_CASE("closed-form nonlinearities") {
    const auto e = Nonlinearity::exponential(2.0);
    CHECK(e.g(1.0) == doctest::Approx(2.0 * std::exp(1.0)));
    CHECK(e.g_prime(1.0) == doctest::Approx(2.0 * std::exp(1.0)));
    CHECK(e.G(0.0) == doctest::Approx(2.0));
    CHECK(e.with_lambda(3.0).lambda() == 3.0);
    CHECK_THROWS_AS((void)e.m(), InvalidArgument);

    const auto pw = Nonlinearity::power(3.0, 1.5);
    CHECK(pw.m() == 3.0);
    CHECK(pw.g(1.0) == doctest::Approx(1.5 * 8.0));
    CHECK(pw.f_prime(1.0) == doctest::Approx(12.0));
    CHECK(pw.G(1.0) == doctest::Approx(1.5 * 16.0 / 4.0));
    // Positive part below u = -1.
    CHECK(pw.f(-2.0) == 0.0);
    CHECK_THROWS_AS(Nonlinearity::power(-1.0), InvalidArgument);
    CHECK(Nonlinearity::power(0.0).f(3.0) == 1.0);
  }

  TEST_CASE("tabulated nonlinearity interpolates monotone data") {
    std::vector<TableNode> nodes;
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.1 * i;
      nodes.push_back({t, std::exp(t), std::exp(t), std::exp(t)});
    }
    const auto tab = Nonlinearity::tabulated(nodes, 1.0);
    CHECK(tab.table_range().first == 0.0);
    CHECK(tab.table_range().second == doctest::Approx(4.0));
    for (double t : {0.0, 0.05, 1.234, 3.99}) {
      CHECK(tab.f(t) == doctest::Approx(std::exp(t)).epsilon(1e-5));
      CHECK(tab.f_prime(t) == doctest::Approx(std::exp(t)).epsilon(1e-3));
    }
    double previous = tab.f(0.0);
    for (double t = 0.01; t <= 4.0; t += 0.01) {
      CHECK(tab.f(t) >= previous);
      previous = tab.f(t);
    }
    CHECK_THROWS_AS((void)tab.f(4.5), EvaluationError);
    CHECK(tab.has_antiderivative());
  }

  TEST_CASE("problem validation") {
    const ProblemSpec ok{2.0, 2.0};
    const ProblemSpec low_n{0.5, 2.0};
    const ProblemSpec low_p{3.0, 1.0};
    CHECK_NOTHROW(ok.validate());
    CHECK_THROWS_AS(low_n.validate(), InvalidArgument);
    CHECK_THROWS_AS(low_p.validate(), InvalidArgument);
    CHECK(ok.integer_dimension());
    const ProblemSpec fractional{3.5, 2.0};
    CHECK_FALSE(fractional.integer_dimension());
  }

  TEST_CASE("profiles: flux, slope and invariants") {
    const auto grid = make_grid(1e-6, 256);
    const double n = 3.0;
    const double p = 3.0;
    std::vector<double> u(grid.size()), u_r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      u[i] = 1.0 - grid[i] * grid[i];
      u_r[i] = -2.0 * grid[i];
    }
    const auto profile = RadialProfile::from_slope(grid, n, p, u, u_r);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid[i];
      CHECK(profile.w()[i] == doctest::Approx(-r * r * 4.0 * r * r).epsilon(1e-13));
      CHECK(slope_from_flux(profile.w()[i], r, n, p) == doctest::Approx(u_r[i]).epsilon(1e-13));
      CHECK(flux_from_slope(u_r[i], r, n, p) == doctest::Approx(profile.w()[i]).epsilon(1e-15));
    }
    CHECK(profile.normalized().u().back() == 0.0);

    std::vector<double> rising = u;
    rising[100] = rising[99] + 0.1;
    CHECK_THROWS_AS(RadialProfile::from_slope(grid, n, p, rising, u_r), InvalidArgument);
    std::vector<double> bad_w(grid.size(), 1.0);
    CHECK_THROWS_AS(RadialProfile::from_flux(grid, n, p, u, bad_w), InvalidArgument);
  }

  TEST_CASE("energy of a paraboloid") {
    // u = 1 - r^2, n = p = 2, G = 0: (1/2) int 4 r^2 r dr = 1/2.
    const auto grid = make_grid(1e-8, 800);
    std::vector<double> u(grid.size()), u_r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      u[i] = 1.0 - grid[i] * grid[i];
      u_r[i] = -2.0 * grid[i];
    }
    const auto profile = RadialProfile::from_slope(grid, 2.0, 2.0, u, u_r);
    CHECK(energy(profile, [](double) { return 0.0; }) == doctest::Approx(0.5).epsilon(1e-12));
    // G = e^t: subtract int e^{1-r^2} r dr = (e - 1)/2.
    CHECK(energy(profile, Nonlinearity::exponential()) ==
          doctest::Approx(0.5 - (std::exp(1.0) - 1.0) / 2.0).epsilon(1e-7));
  }
}
