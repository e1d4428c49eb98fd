#pragma once

#include <Eigen/Dense>

#include "bits/gp.hpp"
#include "bits/hmc.hpp"
#include "bits/priors.hpp"

namespace bits {

// Hierarchical posterior over kernel hyperparameters. The hyperparameter
// vector theta holds (kernel variance, per-dimension squared length
// scales...); the kernel template supplies the family and any fixed shape
// parameters. theta is sampled in unconstrained coordinates u via the priors'
// bijections.
struct GPPosterior {
  Dataset dataset;
  KernelSpec kernel_template;
  PriorSpec priors;
  double noise_var = 0.01;
  double mean_const = 0.0;

  int dim() const { return static_cast<int>(priors.size()); }

  KernelSpec kernel_for(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd constrain(const Eigen::VectorXd& u) const;
  Eigen::VectorXd unconstrain(const Eigen::VectorXd& theta) const;

  // log p(y | theta(u)) + log p(theta(u)) + log |J(u)|; -inf outside support
  // or on factorization failure.
  double log_posterior_unconstrained(const Eigen::VectorXd& u) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;

  // Runs HMC with per-chain initial positions drawn from the priors.
  // Returned draws are in constrained space.
  ChainSet run_inference(const HMCConfig& config) const;
};

}  // namespace bits
