#pragma once

#include <Eigen/Dense>

#include "bits/kernels.hpp"

namespace bits {

// Training data in the (transformed) design space. Inputs are stored one per
// column so a column view is a point.
struct Dataset {
  Eigen::MatrixXd X;  // d x n
  Eigen::VectorXd y;  // n

  Eigen::Index size() const { return y.size(); }
  Eigen::Index dim() const { return X.rows(); }
  void validate() const;
};

// A GP conditioned on a dataset with fixed hyperparameters. Immutable after
// construction; predict() is read-only and thread-safe.
class GPState {
 public:
  GPState(Dataset dataset, KernelSpec kernel, double noise_var, double mean_const = 0.0);

  // Predictive mean and variance of the latent function at x. Variance is
  // clamped to [0, k(x,x)]; clamping below -1e-8 increments a counter
  // retrievable via negative_variance_clamps().
  std::pair<double, double> predict(const Eigen::VectorXd& x) const;

  const Dataset& dataset() const { return data_; }
  const KernelSpec& kernel() const { return kernel_; }
  double noise_var() const { return noise_var_; }
  double mean_const() const { return mean_const_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& chol() const { return chol_; }
  static long negative_variance_clamps();

 private:
  Dataset data_;
  KernelSpec kernel_;
  double noise_var_;
  double mean_const_;
  Eigen::MatrixXd chol_;     // lower factor of K + noise_var I (empty dataset: 0x0)
  Eigen::VectorXd weights_;  // (K + noise_var I)^-1 (y - m)
};

GPState condition(const Dataset& dataset, const KernelSpec& kernel, double noise_var,
                  double mean_const = 0.0);

double log_marginal_likelihood(const Dataset& dataset, const KernelSpec& kernel,
                               double noise_var, double mean_const = 0.0);

}  // namespace bits
