#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bits/errors.hpp"
#include "bits/priors.hpp"

using namespace bits;

TEST_CASE("gamma log pdf") {
  Prior g{"v", PriorFamily::Gamma, 2.0, 1.0};
  // Gamma(2,1) density at 1: x e^-x -> log = -1
  CHECK(g.log_pdf(1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g.log_pdf(-0.5) == -std::numeric_limits<double>::infinity());

  Prior g2{"t", PriorFamily::Gamma, 4.0, 2.0};
  // log pdf = a log b - lgamma(a) + (a-1) log x - b x
  const double x = 1.3;
  const double want = 4.0 * std::log(2.0) - std::lgamma(4.0) + 3.0 * std::log(x) - 2.0 * x;
  CHECK(g2.log_pdf(x) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("uniform log pdf") {
  Prior u{"l", PriorFamily::Uniform, 0.1, 50.0};
  CHECK(u.log_pdf(25.0) == doctest::Approx(-std::log(49.9)).epsilon(1e-14));
  CHECK(u.log_pdf(0.05) == -std::numeric_limits<double>::infinity());
  CHECK(u.log_pdf(51.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("bijections round-trip and midpoints") {
  Prior g{"v", PriorFamily::Gamma, 2.0, 1.0};
  CHECK(g.to_constrained(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.log_jacobian(0.0) == doctest::Approx(0.0).epsilon(1e-14));

  Prior u{"l", PriorFamily::Uniform, 0.1, 50.0};
  CHECK(u.to_constrained(0.0) == doctest::Approx(25.05).epsilon(1e-12));
  CHECK(u.log_jacobian(0.0) == doctest::Approx(std::log(49.9 * 0.25)).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double v = normal(rng);
    CHECK(g.to_unconstrained(g.to_constrained(v)) == doctest::Approx(v).epsilon(1e-10));
    CHECK(u.to_unconstrained(u.to_constrained(v)) == doctest::Approx(v).epsilon(1e-8));
    CHECK(g.in_support(g.to_constrained(v)));
    CHECK(u.in_support(u.to_constrained(v)));
  }
}

TEST_CASE("jacobians match numerical derivatives") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 1.5);
  const double h = 1e-6;
  for (const Prior& p : case_study_priors()) {
    for (int i = 0; i < 50; ++i) {
      const double v = normal(rng);
      const double num =
          std::log((p.to_constrained(v + h) - p.to_constrained(v - h)) / (2.0 * h));
      CHECK(p.log_jacobian(v) == doctest::Approx(num).epsilon(1e-5));
    }
  }
}

TEST_CASE("sampling stays in support and matches gamma moments") {
  std::mt19937_64 rng(13);
  Prior g{"t", PriorFamily::Gamma, 4.0, 2.0};
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = g.sample(rng);
    CHECK(v > 0.0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(2.0).epsilon(0.02));

  Prior u{"l", PriorFamily::Uniform, 0.1, 50.0};
  for (int i = 0; i < 1000; ++i) {
    const double v = u.sample(rng);
    CHECK(v > 0.1);
    CHECK(v < 50.0);
  }
}

TEST_CASE("case study prior table") {
  const PriorSpec priors = case_study_priors();
  REQUIRE(priors.size() == 3);
  CHECK(priors[0].family == PriorFamily::Gamma);
  CHECK(priors[0].a == 2.0);
  CHECK(priors[0].b == 1.0);
  CHECK(priors[1].family == PriorFamily::Uniform);
  CHECK(priors[1].a == 0.1);
  CHECK(priors[1].b == 50.0);
  CHECK(priors[2].family == PriorFamily::Gamma);
  CHECK(priors[2].a == 4.0);
  CHECK(priors[2].b == 2.0);
}

TEST_CASE("invalid parameters rejected") {
  Prior g{"v", PriorFamily::Gamma, -1.0, 1.0};
  CHECK_THROWS_AS(g.validate(), DomainError);
  Prior u{"l", PriorFamily::Uniform, 2.0, 2.0};
  CHECK_THROWS_AS(u.validate(), DomainError);
}
