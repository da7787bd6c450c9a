#include <doctest.h>

#include <cmath>
#include <variant>

#include "plap/estimates.hpp"
#include "plap/field.hpp"
#include "plap/oracle.hpp"

using namespace plap;

namespace {

DerivativeFn derivative_of(const Nonlinearity& g) {
  return [g](double t) { return g.g_prime(t); };
}

StabilityReport stability_of(const ExactSolution& exact) {
  StabilityControls controls;
  controls.sensitivity = false;
  return analyze_stability(exact, derivative_of(exact.nonlinearity()), controls);
}

}  // namespace

TEST_SUITE("estimates") {
  TEST_CASE("Lq norms of the power solution diverge at q = n(m-(p-1))/p") {
    const auto grid = make_grid(1e-8, 2000);
    const auto profile = exact_power(15, 2, 5).sample(grid);
    CHECK(lq_norm(profile, 29.0).is_finite());
    CHECK_FALSE(lq_norm(profile, 31.0).is_finite());
    CHECK_FALSE(lq_norm(profile, ExtendedReal::infinity()).is_finite());
    const auto threshold = integrability_threshold(profile, NormKind::Lq, 1, 100);
    REQUIRE(threshold.has_value());
    CHECK(*threshold == doctest::Approx(30.0).epsilon(0.02));
  }

  TEST_CASE("thresholds at m_cs match q0 and q1") {
    const auto grid = make_grid(1e-8, 2000);
    const auto profile = exact_power(15, 2, m_cs(15, 2).value()).sample(grid);
    const auto lq = integrability_threshold(profile, NormKind::Lq, 1, 100);
    const auto w1q = integrability_threshold(profile, NormKind::W1q, 1, 100);
    REQUIRE(lq.has_value());
    REQUIRE(w1q.has_value());
    CHECK(*lq == doctest::Approx(8.5307606647144074).epsilon(0.02));
    CHECK(*w1q == doctest::Approx(5.4380481699684645).epsilon(0.02));
    CHECK(w1q_norm(profile, 5.0).is_finite());
  }

  TEST_CASE("bounded profile: every norm finite") {
    const auto grid = make_grid(1e-8, 1000);
    auto outcome = minimal_iterate(ProblemSpec{2, 2, Nonlinearity::exponential(1.0)}, grid);
    const auto& profile = std::get<MinimalSolution>(outcome).profile;
    const auto sup = lq_norm(profile, ExtendedReal::infinity());
    REQUIRE(sup.is_finite());
    CHECK(sup.value() == doctest::Approx(0.31669436764074988).epsilon(1e-8));
    CHECK_FALSE(integrability_threshold(profile, NormKind::Lq, 1, 200).has_value());
    CHECK(gradient_lp_norm(profile) > 0.0);
  }

  TEST_CASE("growth exponent fits") {
    const auto grid = make_grid(1e-8, 2000);
    const auto m5 = exact_power(15, 2, 5).sample(grid);
    const auto fit = singularity_exponent_fit(m5, 1e-7, 1e-1);
    CHECK(fit.accepted);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-6));

    const auto critical = exact_power(15, 2, m_cs(15, 2).value()).sample(grid);
    CHECK(singularity_exponent_fit(critical, 1e-7, 1e-1).slope ==
          doctest::Approx(-1.7583426132260586).epsilon(1e-6));

    const auto exp12 = exact_exponential(12, 2).sample(grid);
    CHECK_THROWS_AS(singularity_exponent_fit(exp12, 1e-7, 1e-1), PreconditionFailed);
    CHECK(log_singularity_fit(exp12, 1e-7, 1e-1).slope == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(singularity_exponent_fit(m5, 1e-7, 5e-7), InvalidArgument);
  }

  TEST_CASE("regularity checks on the exact exponential solution, n = 12") {
    const auto grid = make_grid(1e-8, 2000);
    const auto exact = exact_exponential(12, 2);
    const auto report = check_theorem1(exact.sample(grid), exact.problem(), stability_of(exact));
    CHECK(report.regime == Regime::Supercritical);
    CHECK_FALSE(report.sup_norm.is_finite());
    CHECK(report.passed());
    CHECK(report.w1p_norm == doctest::Approx(0.63610504606521526).epsilon(1e-8));
    CHECK(report.target_growth == doctest::Approx(pointwise_exponent(12, 2)));
  }

  TEST_CASE("regularity checks refuse unstable input") {
    const auto grid = make_grid(1e-8, 1000);
    const auto exact = exact_exponential(8, 2);
    CHECK_THROWS_AS(check_theorem1(exact.sample(grid), exact.problem(), stability_of(exact)),
                    PreconditionFailed);
  }

  TEST_CASE("gradient bound and flux monotonicity") {
    const auto grid = make_grid(1e-8, 2000);
    const auto exact = exact_exponential(12, 2);
    const auto profile = exact.sample(grid);
    const auto bound = gradient_L1_bound(profile, exact.nonlinearity());
    CHECK(bound.lhs == doctest::Approx(std::sqrt(0.4)).epsilon(1e-8));
    CHECK(bound.implied_constant > 0.0);
    CHECK(flux_monotonicity_check(profile).monotone);
  }

  TEST_CASE("uniform bound along the disk branch") {
    const auto grid = make_grid(1e-8, 2000);
    const auto result = lambda_star_estimate(ProblemSpec{2, 2, Nonlinearity::exponential()}, grid);
    const auto bound = uniform_bound_check(result);
    CHECK(bound.monotone);
    CHECK(bound.passed);
    CHECK(bound.ratio <= 1.05);
  }
}
