#pragma once

#include <cstdint>
#include <vector>

namespace bits {

// Uniformly weighted univariate Gaussian mixture at a single test input.
struct MixtureAtPoint {
  std::vector<double> means;
  std::vector<double> vars;

  int size() const { return static_cast<int>(means.size()); }
  void validate() const;
  // log of the mixture density, evaluated via log-sum-exp so far-separated
  // components do not underflow.
  double log_density(double f) const;
};

// 1/2 log(2 pi e sigma^2)
double gaussian_entropy(double var);

// Truncated-Taylor differential entropy of the mixture; order R in {2, 4}.
// Log-density derivatives are analytic (Hermite-weighted component sums).
double taylor_entropy(const MixtureAtPoint& mix, int order = 2);

// Jensen lower bound via pairwise Gaussian cross-overlaps.
double entropy_lower_bound(const MixtureAtPoint& mix);

struct MCEntropy {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monte Carlo reference estimator: mean of -log p over mixture draws.
MCEntropy mc_entropy(const MixtureAtPoint& mix, long n_draws, std::uint64_t seed);

// Negative Taylor entropy at the default order.
double information(const MixtureAtPoint& mix);

}  // namespace bits
