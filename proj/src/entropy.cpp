#include "bits/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bits/errors.hpp"

namespace bits {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

double logsumexp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Ratios p^(k)(x)/p(x) for k = 1..4, computed from component log-densities so
// the shared normalization cancels. Probabilists' Hermite polynomials give
// the k-th derivative of a Gaussian: N^(k) = N * (-1)^k He_k(t) / sigma^k.
struct DensityRatios {
  double log_p;
  double m1, m2, m3, m4;
};

DensityRatios density_ratios(const MixtureAtPoint& mix, double x) {
  const int S = mix.size();
  std::vector<double> logn(S);
  for (int s = 0; s < S; ++s) logn[s] = log_normal_pdf(x, mix.means[s], mix.vars[s]);
  const double lse = logsumexp(logn);

  DensityRatios r{lse - std::log(static_cast<double>(S)), 0.0, 0.0, 0.0, 0.0};
  for (int s = 0; s < S; ++s) {
    const double w = std::exp(logn[s] - lse);
    const double sd = std::sqrt(mix.vars[s]);
    const double t = (x - mix.means[s]) / sd;
    const double t2 = t * t;
    r.m1 += w * (-t / sd);
    r.m2 += w * ((t2 - 1.0) / mix.vars[s]);
    r.m3 += w * (-(t2 - 3.0) * t / (mix.vars[s] * sd));
    r.m4 += w * ((t2 * t2 - 6.0 * t2 + 3.0) / (mix.vars[s] * mix.vars[s]));
  }
  return r;
}

}  // namespace

void MixtureAtPoint::validate() const {
  if (means.empty()) throw InputError("mixture needs at least one component");
  if (means.size() != vars.size())
    throw InputError("mixture means/variances length mismatch");
  for (double v : vars)
    if (!(v > 0.0)) throw DomainError("mixture component variances must be positive");
}

double MixtureAtPoint::log_density(double f) const {
  std::vector<double> logn(means.size());
  for (std::size_t s = 0; s < means.size(); ++s)
    logn[s] = log_normal_pdf(f, means[s], vars[s]);
  return logsumexp(logn) - std::log(static_cast<double>(means.size()));
}

double gaussian_entropy(double var) {
  if (!(var > 0.0)) throw DomainError("gaussian_entropy needs a positive variance");
  return 0.5 * (kLog2Pi + 1.0 + std::log(var));
}

double taylor_entropy(const MixtureAtPoint& mix, int order) {
  mix.validate();
  if (order != 2 && order != 4)
    throw ConfigError("taylor_entropy supports orders 2 and 4");
  const int S = mix.size();
  double acc = 0.0;
  for (int s = 0; s < S; ++s) {
    const DensityRatios r = density_ratios(mix, mix.means[s]);
    const double v = mix.vars[s];
    // Odd-order central moments vanish; M2 = v, M4 = 3 v^2.
    const double l2 = r.m2 - r.m1 * r.m1;
    double a = r.log_p + 0.5 * l2 * v;
    if (order >= 4) {
      const double l4 = r.m4 - 4.0 * r.m1 * r.m3 - 3.0 * r.m2 * r.m2 +
                        12.0 * r.m1 * r.m1 * r.m2 - 6.0 * std::pow(r.m1, 4);
      a += l4 * 3.0 * v * v / 24.0;
    }
    acc += a;
  }
  return -acc / S;
}

double entropy_lower_bound(const MixtureAtPoint& mix) {
  mix.validate();
  const int S = mix.size();
  double acc = 0.0;
  std::vector<double> log_xi(S);
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < S; ++t)
      log_xi[t] = log_normal_pdf(mix.means[s], mix.means[t], mix.vars[s] + mix.vars[t]);
    acc += logsumexp(log_xi) - std::log(static_cast<double>(S));
  }
  return -acc / S;
}

MCEntropy mc_entropy(const MixtureAtPoint& mix, long n_draws, std::uint64_t seed) {
  mix.validate();
  if (n_draws < 1000) throw InputError("mc_entropy needs at least 1000 draws");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, mix.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < n_draws; ++i) {
    const int s = pick(rng);
    const double f = mix.means[s] + std::sqrt(mix.vars[s]) * normal(rng);
    const double nll = -mix.log_density(f);
    sum += nll;
    sumsq += nll * nll;
  }
  const double n = static_cast<double>(n_draws);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

double information(const MixtureAtPoint& mix) { return -taylor_entropy(mix, 2); }

}  // namespace bits
