#pragma once

#include <Eigen/Dense>
#include <vector>

namespace bits {

enum class KernelFamily { SE, RQ, Matern };

// Stationary kernel description. Length scale entries are the *squared*
// length scales, i.e. the diagonal of L in k = tau^-1 exp(-1/2 d^T L^-1 d),
// so the 1-D SE kernel reads exp(-d^2 / (2*ell)). One entry means isotropic,
// d entries means per-dimension (ARD).
struct KernelSpec {
  KernelFamily family = KernelFamily::SE;
  double tau = 1.0;                       // process precision; prior variance is 1/tau
  std::vector<double> length_scales{1.0}; // squared length scales
  double alpha = 1.0;                     // RQ only
  double nu = 1.5;                        // Matern only; closed forms for 1/2, 3/2, 5/2

  void validate(int dim) const;
};

struct CovMatrix {
  Eigen::MatrixXd entries;
  double jitter = 0.0;
};

// Squared Mahalanobis distance d^T L^-1 d with L = diag(length_scales).
double scaled_sqdist(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                     const KernelSpec& spec);

double eval_se(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec);
double eval_rq(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec);
double eval_matern(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec);

// Dispatch on spec.family.
double eval_kernel(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec);

// Covariance matrix over the columns of X (one input per column), jitter
// added to the diagonal. OpenMP-parallel over rows; build_cov_serial is the
// reference used in tests and benchmarks.
CovMatrix build_cov(const Eigen::MatrixXd& X, const KernelSpec& spec, double jitter);
CovMatrix build_cov_serial(const Eigen::MatrixXd& X, const KernelSpec& spec, double jitter);

}  // namespace bits
