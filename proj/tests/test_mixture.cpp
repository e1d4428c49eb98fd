#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "bits/errors.hpp"
#include "bits/mixture.hpp"

using namespace bits;

namespace {

GPState prior_component(double tau, double mean_const = 0.0) {
  Dataset d;
  d.X.resize(1, 0);
  d.y.resize(0);
  KernelSpec spec;
  spec.tau = tau;
  return GPState(d, spec, 0.01, mean_const);
}

}  // namespace

TEST_CASE("mixture moments closed forms") {
  MixtureAtPoint one{{1.5}, {0.7}};
  auto [m1, v1] = mixture_moments(one);
  CHECK(m1 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(v1 == doctest::Approx(0.7).epsilon(1e-14));

  MixtureAtPoint two{{-1.0, 1.0}, {1.0, 1.0}};
  auto [m2, v2] = mixture_moments(two);
  CHECK(m2 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(v2 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("moments match monte carlo on a random mixture") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mu(-3.0, 3.0), var(0.2, 2.0);
  MixtureAtPoint mix;
  for (int s = 0; s < 5; ++s) {
    mix.means.push_back(mu(rng));
    mix.vars.push_back(var(rng));
  }
  auto [mean, variance] = mixture_moments(mix);
  const long n = 1000000;
  const auto draws = sample_posterior(mix, n, 77);
  double sum = 0.0, sq = 0.0;
  for (double d : draws) {
    sum += d;
    sq += d * d;
  }
  const double mc_mean = sum / n;
  const double mc_var = sq / n - mc_mean * mc_mean;
  const double se_mean = std::sqrt(variance / n);
  CHECK(std::abs(mc_mean - mean) < 3.0 * se_mean);
  CHECK(std::abs(mc_var - variance) < 0.01 * variance + 3.0 * variance * std::sqrt(2.0 / n));
}

TEST_CASE("mixture posterior at a point and permutation invariance") {
  std::vector<GPState> comps;
  comps.push_back(prior_component(1.0, 0.3));
  comps.push_back(prior_component(4.0, -0.2));
  comps.push_back(prior_component(2.0, 0.1));
  const MixturePosterior mix(comps);
  std::vector<GPState> perm{comps[2], comps[0], comps[1]};
  const MixturePosterior mix2(perm);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.5);
  auto [ma, va] = mixture_moments(mix, x);
  auto [mb, vb] = mixture_moments(mix2, x);
  CHECK(ma == doctest::Approx(mb).epsilon(1e-14));
  CHECK(va == doctest::Approx(vb).epsilon(1e-14));
  // spread term keeps mixture variance above the average component variance
  CHECK(va >= (1.0 + 0.25 + 0.5) / 3.0);
}

TEST_CASE("degenerate sampling returns the common mean") {
  MixtureAtPoint mix{{2.5, 2.5}, {1e-20, 1e-20}};
  for (double d : sample_posterior(mix, 1000, 11))
    CHECK(d == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("single component sampling moments") {
  MixtureAtPoint mix{{1.0}, {4.0}};
  const long n = 1000000;
  const auto draws = sample_posterior(mix, n, 13);
  double sum = 0.0, sq = 0.0;
  for (double d : draws) {
    sum += d;
    sq += d * d;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(4.0 / n));
  CHECK(std::abs(var - 4.0) < 3.0 * 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("component selection is uniform (chi-squared)") {
  // components separated far enough to classify each draw by nearest mean
  MixtureAtPoint mix{{0.0, 100.0, 200.0, 300.0}, {1.0, 1.0, 1.0, 1.0}};
  const long n = 100000;
  const auto draws = sample_posterior(mix, n, 17);
  std::vector<long> counts(4, 0);
  for (double d : draws) counts[std::clamp(static_cast<int>(std::lround(d / 100.0)), 0, 3)]++;
  double chi2 = 0.0;
  const double expected = n / 4.0;
  for (long c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 11.345);  // chi-squared(3) at p = 0.01
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  MixtureAtPoint mix{{0.0, 1.0}, {1.0, 0.5}};
  CHECK(sample_posterior(mix, 100, 5) == sample_posterior(mix, 100, 5));
}

TEST_CASE("credible region degenerate and gaussian cases") {
  std::vector<GPState> comps{prior_component(1e18, 0.7)};  // variance ~ 1e-18
  const MixturePosterior degenerate(comps);
  std::vector<Eigen::VectorXd> pts{Eigen::VectorXd::Constant(1, 0.0)};
  const CredibleBand flat = credible_region(degenerate, pts, 1000, 0.05, 3);
  CHECK(flat.lower[0] == doctest::Approx(0.7).epsilon(1e-4));
  CHECK(flat.upper[0] == doctest::Approx(0.7).epsilon(1e-4));

  std::vector<GPState> one{prior_component(1.0, 0.0)};  // N(0, ~1 + noise 0.01)
  const MixturePosterior gauss(one);
  const CredibleBand band = credible_region(gauss, pts, 100000, 0.05, 7);
  const double sigma = std::sqrt(gauss.at(pts[0]).vars[0]);
  CHECK(std::abs(band.lower[0] + 1.96 * sigma) < 0.02 * sigma);
  CHECK(std::abs(band.upper[0] - 1.96 * sigma) < 0.02 * sigma);
  CHECK(band.lower[0] <= band.mean[0]);
  CHECK(band.mean[0] <= band.upper[0]);
}

TEST_CASE("wide-alpha band brackets the inner region of a bimodal mixture") {
  MixtureAtPoint mix{{0.0, 100.0}, {1.0, 1.0}};
  const long q = 100000;
  auto draws = sample_posterior(mix, q, 31);
  std::sort(draws.begin(), draws.end());
  const double lower = draws[static_cast<long>(std::ceil(0.25 * q)) - 1];
  const double upper = draws[static_cast<long>(std::ceil(0.75 * q)) - 1];
  CHECK(lower < 3.0);
  CHECK(upper > 97.0);
}

TEST_CASE("credible region rejects too-small draw counts") {
  std::vector<GPState> one{prior_component(1.0)};
  const MixturePosterior mix(one);
  std::vector<Eigen::VectorXd> pts{Eigen::VectorXd::Constant(1, 0.0)};
  CHECK_THROWS_AS(credible_region(mix, pts, 10, 0.05, 1), InputError);
}

TEST_CASE("empty component list rejected") {
  CHECK_THROWS_AS(MixturePosterior(std::vector<GPState>{}), InputError);
}
