#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bits/entropy.hpp"
#include "bits/gp.hpp"

namespace bits {

// Hierarchical predictive posterior: uniformly weighted mixture of GP
// predictives, one per hyperparameter draw. Components share dataset and
// noise variance; each carries its own Cholesky factorization, computed once
// and reused for every query.
class MixturePosterior {
 public:
  explicit MixturePosterior(std::vector<GPState> components);

  int size() const { return static_cast<int>(components_.size()); }
  const std::vector<GPState>& components() const { return components_; }

  // Component means/variances at x; variances floored at var_floor so a
  // noise-free interpolation point still yields a valid mixture.
  MixtureAtPoint at(const Eigen::VectorXd& x, double var_floor = 1e-12) const;

 private:
  std::vector<GPState> components_;
};

std::pair<double, double> mixture_moments(const MixturePosterior& mix, const Eigen::VectorXd& x);
std::pair<double, double> mixture_moments(const MixtureAtPoint& mix);

std::vector<double> sample_posterior(const MixturePosterior& mix, const Eigen::VectorXd& x,
                                     long q, std::uint64_t seed);
std::vector<double> sample_posterior(const MixtureAtPoint& mix, long q, std::uint64_t seed);

struct CredibleBand {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double alpha = 0.05;
  long samples_per_point = 0;
};

// Empirical pointwise band: Q sorted mixture draws per test point, percentile
// indices ceil((alpha/2) Q) and ceil((1 - alpha/2) Q), 1-based, clamped.
CredibleBand credible_region(const MixturePosterior& mix,
                             const std::vector<Eigen::VectorXd>& test_points, long q,
                             double alpha, std::uint64_t seed);

}  // namespace bits
