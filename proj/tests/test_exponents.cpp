#include <doctest.h>

#include <cmath>
#include <random>

#include "plap/exponents.hpp"

using namespace plap;

TEST_SUITE("exponents") {
  TEST_CASE("critical dimension") {
    CHECK(critical_dimension(3.0) == 9.0);
    CHECK(critical_dimension(2.0) == 10.0);
    CHECK(critical_dimension(5.0) == 10.0);
    CHECK_THROWS_AS(critical_dimension(1.0), InvalidArgument);
    CHECK_THROWS_AS(critical_dimension(0.5), InvalidArgument);
  }

  TEST_CASE("regime classification") {
    CHECK(classify(5.0, 2.0) == Regime::Bounded);
    CHECK(classify(10.0, 2.0) == Regime::Critical);
    CHECK(classify(9.0, 3.0) == Regime::Critical);
    CHECK(classify(12.0, 2.0) == Regime::Supercritical);
    CHECK(regime_letter(classify(12.0, 2.0)) == "C");
    const auto report = classify_regime(9.5, 3.0);
    CHECK(report.non_integer_dimension);
    CHECK(report.regime == Regime::Supercritical);
  }

  TEST_CASE("reference values") {
    // mpmath, 40 digits.
    struct Row {
      double n, p, q0, q1, mcs;
    };
    for (const Row& row : {Row{12, 2, 17.559899496852960, 7.1285355345903427, 3.9266499161421599},
                           Row{15, 2, 8.5307606647144074, 5.4380481699684645, 2.1374347552952543},
                           Row{20, 3, 6.7907210704713293, 5.0694574831403447, 3.0186081605706994},
                           Row{11, 2.5, 20.583490226370393, 7.1688844667657415,
                               6.1780659605387256}}) {
      CAPTURE(row.n);
      CAPTURE(row.p);
      CHECK(q_exponent(row.n, row.p, 0).value() == doctest::Approx(row.q0).epsilon(1e-13));
      CHECK(q_exponent(row.n, row.p, 1).value() == doctest::Approx(row.q1).epsilon(1e-13));
      CHECK(m_cs(row.n, row.p).value() == doctest::Approx(row.mcs).epsilon(1e-13));
    }
    CHECK(pointwise_exponent(15, 2) == doctest::Approx(1.7583426132260586).epsilon(1e-14));
  }

  TEST_CASE("critical and bounded dimensions") {
    CHECK_FALSE(q_exponent(10, 2, 0).is_finite());
    CHECK(q_exponent(10, 2, 1).value() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(q_exponent(9, 3, 1).value() == doctest::Approx(9.0).epsilon(1e-12));
    CHECK_FALSE(q_exponent(5, 2, 0).is_finite());
    CHECK_FALSE(q_exponent(5, 2, 1).is_finite());
    CHECK_FALSE(m_cs(10, 2).is_finite());
    CHECK_THROWS_AS(consistency_q0_mcs(10, 2), RegimeMismatch);
    CHECK_THROWS_AS(q_exponent(12, 2, 2), InvalidArgument);
  }

  TEST_CASE("randomized identities above the critical dimension") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> p_dist(1.05, 10.0);
    std::uniform_real_distribution<double> excess(1e-3, 100.0);
    for (int i = 0; i < 1000; ++i) {
      const double p = p_dist(rng);
      const double n = critical_dimension(p) + excess(rng);
      CAPTURE(n);
      CAPTURE(p);
      const double q0 = q_exponent(n, p, 0).value();
      const double q1 = q_exponent(n, p, 1).value();
      REQUIRE(consistency_q0_mcs(n, p) < 1e-9);
      REQUIRE(std::abs(1.0 / q1 - 1.0 / q0 - 1.0 / n) < 1e-12);
      REQUIRE(q1 > p);
      REQUIRE(q0 > q1);
      REQUIRE(m_cs(n, p).value() > p - 1.0);
    }
  }

  TEST_CASE("p = 2 closed form of q0") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> n_dist(10.01, 200.0);
    for (int i = 0; i < 200; ++i) {
      const double n = n_dist(rng);
      const double closed = 2.0 * n / (n - 4.0 - 2.0 * std::sqrt(n - 1.0));
      REQUIRE(q_exponent(n, 2.0, 0).value() == doctest::Approx(closed).epsilon(1e-12));
    }
  }
}
