#include "bits/gp.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "bits/errors.hpp"

namespace bits {

namespace {
std::atomic<long> g_negative_variance_clamps{0};

// Lower Cholesky factor of K + noise_var I, or a NumericalError naming the
// minimum eigenvalue so the caller knows how much jitter would help.
Eigen::MatrixXd factorize(const Eigen::MatrixXd& K, double noise_var) {
  Eigen::MatrixXd A = K;
  A.diagonal().array() += noise_var;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A)
                               .eigenvalues().minCoeff();
    throw NumericalError("Cholesky factorization of K + noise failed; minimum eigenvalue " +
                         std::to_string(min_eig) + " — increase jitter/noise variance");
  }
  return llt.matrixL();
}
}  // namespace

void Dataset::validate() const {
  if (X.cols() != y.size())
    throw InputError("dataset has " + std::to_string(X.cols()) + " inputs but " +
                     std::to_string(y.size()) + " outputs");
  if (!X.allFinite() || !y.allFinite())
    throw InputError("dataset contains non-finite values");
}

GPState::GPState(Dataset dataset, KernelSpec kernel, double noise_var, double mean_const)
    : data_(std::move(dataset)), kernel_(std::move(kernel)), noise_var_(noise_var),
      mean_const_(mean_const) {
  data_.validate();
  if (noise_var_ < 0.0) throw InputError("noise variance must be nonnegative");
  const Eigen::Index n = data_.size();
  if (n == 0) return;  // prior-only state
  kernel_.validate(static_cast<int>(data_.dim()));
  const CovMatrix K = build_cov(data_.X, kernel_, 0.0);
  chol_ = factorize(K.entries, noise_var_);
  const Eigen::VectorXd r = data_.y.array() - mean_const_;
  weights_ = chol_.transpose().triangularView<Eigen::Upper>().solve(
      chol_.triangularView<Eigen::Lower>().solve(r));
}

std::pair<double, double> GPState::predict(const Eigen::VectorXd& x) const {
  if (!x.allFinite()) throw InputError("prediction input has non-finite entries");
  const double prior_var = 1.0 / kernel_.tau;
  if (data_.size() == 0) return {mean_const_, prior_var};
  if (x.size() != data_.dim())
    throw InputError("prediction input dimension " + std::to_string(x.size()) +
                     " does not match dataset dimension " + std::to_string(data_.dim()));
  const Eigen::Index n = data_.size();
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) ks[i] = eval_kernel(x, data_.X.col(i), kernel_);
  const double mean = mean_const_ + ks.dot(weights_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(ks);
  double var = prior_var - v.squaredNorm();
  if (var < 0.0) {
    if (var < -1e-8) ++g_negative_variance_clamps;
    var = 0.0;
  }
  if (var > prior_var) var = prior_var;
  return {mean, var};
}

long GPState::negative_variance_clamps() { return g_negative_variance_clamps.load(); }

GPState condition(const Dataset& dataset, const KernelSpec& kernel, double noise_var,
                  double mean_const) {
  return GPState(dataset, kernel, noise_var, mean_const);
}

double log_marginal_likelihood(const Dataset& dataset, const KernelSpec& kernel,
                               double noise_var, double mean_const) {
  dataset.validate();
  const Eigen::Index n = dataset.size();
  if (n == 0) return 0.0;
  const GPState state(dataset, kernel, noise_var, mean_const);
  const Eigen::VectorXd r = dataset.y.array() - mean_const;
  const double quad = r.dot(state.weights());
  const double logdet = 2.0 * state.chol().diagonal().array().log().sum();
  return -0.5 * quad - 0.5 * logdet - 0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

}  // namespace bits
