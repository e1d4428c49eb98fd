#include "bits/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bits/errors.hpp"

namespace bits {

MixturePosterior::MixturePosterior(std::vector<GPState> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InputError("mixture posterior needs at least one component");
}

MixtureAtPoint MixturePosterior::at(const Eigen::VectorXd& x, double var_floor) const {
  MixtureAtPoint mix;
  mix.means.reserve(components_.size());
  mix.vars.reserve(components_.size());
  for (const auto& gp : components_) {
    const auto [mean, var] = gp.predict(x);
    mix.means.push_back(mean);
    mix.vars.push_back(std::max(var, var_floor));
  }
  return mix;
}

std::pair<double, double> mixture_moments(const MixtureAtPoint& mix) {
  mix.validate();
  const int S = mix.size();
  double mean = 0.0;
  for (double m : mix.means) mean += m;
  mean /= S;
  double var = 0.0;
  for (int s = 0; s < S; ++s)
    var += mix.vars[s] + (mix.means[s] - mean) * (mix.means[s] - mean);
  return {mean, var / S};
}

std::pair<double, double> mixture_moments(const MixturePosterior& mix, const Eigen::VectorXd& x) {
  return mixture_moments(mix.at(x, 0.0));
}

std::vector<double> sample_posterior(const MixtureAtPoint& mix, long q, std::uint64_t seed) {
  if (q < 1) throw InputError("sample_posterior needs at least one draw");
  if (mix.means.empty() || mix.means.size() != mix.vars.size())
    throw InputError("malformed mixture");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, mix.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> draws(q);
  for (long i = 0; i < q; ++i) {
    const int s = pick(rng);
    draws[i] = mix.means[s] + std::sqrt(mix.vars[s]) * normal(rng);
  }
  return draws;
}

std::vector<double> sample_posterior(const MixturePosterior& mix, const Eigen::VectorXd& x,
                                     long q, std::uint64_t seed) {
  return sample_posterior(mix.at(x, 0.0), q, seed);
}

CredibleBand credible_region(const MixturePosterior& mix,
                             const std::vector<Eigen::VectorXd>& test_points, long q,
                             double alpha, std::uint64_t seed) {
  if (test_points.empty()) throw InputError("credible_region needs test points");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("credible level alpha must lie in (0,1)");
  if (alpha / 2.0 * q < 1.0)
    throw InputError("credible_region: Q too small for the requested alpha");
  const long lo_idx = static_cast<long>(std::ceil(alpha / 2.0 * q));
  const long hi_idx = std::clamp(static_cast<long>(std::ceil((1.0 - alpha / 2.0) * q)),
                                 1L, q);

  CredibleBand band;
  band.points = test_points;
  band.alpha = alpha;
  band.samples_per_point = q;
  band.mean.resize(test_points.size());
  band.lower.resize(test_points.size());
  band.upper.resize(test_points.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::size_t w = 0; w < test_points.size(); ++w) {
    auto draws = sample_posterior(mix, test_points[w], q, seed + w);
    std::sort(draws.begin(), draws.end());
    band.lower[w] = draws[lo_idx - 1];
    band.upper[w] = draws[hi_idx - 1];
    band.mean[w] = mixture_moments(mix, test_points[w]).first;
  }
  return band;
}

}  // namespace bits
