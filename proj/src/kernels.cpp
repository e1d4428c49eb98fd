#include "bits/kernels.hpp"

#include <cmath>
#include <string>

#include "bits/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bits {

void KernelSpec::validate(int dim) const {
  if (tau <= 0.0) throw DomainError("kernel precision tau must be positive, got " + std::to_string(tau));
  if (length_scales.empty())
    throw InputError("kernel needs at least one length scale");
  if (length_scales.size() != 1 && static_cast<int>(length_scales.size()) != dim)
    throw InputError("length scale count " + std::to_string(length_scales.size()) +
                     " incompatible with input dimension " + std::to_string(dim));
  for (double ls : length_scales)
    if (ls <= 0.0) throw DomainError("length scale entries must be positive");
  if (family == KernelFamily::RQ && alpha <= 0.0)
    throw DomainError("RQ alpha must be positive");
  if (family == KernelFamily::Matern && nu <= 0.0)
    throw DomainError("Matern nu must be positive");
}

double scaled_sqdist(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                     const KernelSpec& spec) {
  if (xi.size() != xj.size())
    throw InputError("kernel inputs have mismatched dimensions " +
                     std::to_string(xi.size()) + " vs " + std::to_string(xj.size()));
  spec.validate(static_cast<int>(xi.size()));
  const bool iso = spec.length_scales.size() == 1;
  double s = 0.0;
  for (Eigen::Index k = 0; k < xi.size(); ++k) {
    const double d = xi[k] - xj[k];
    s += d * d / (iso ? spec.length_scales[0] : spec.length_scales[k]);
  }
  return s;
}

double eval_se(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec) {
  return std::exp(-0.5 * scaled_sqdist(xi, xj, spec)) / spec.tau;
}

double eval_rq(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec) {
  const double r2 = scaled_sqdist(xi, xj, spec);
  return std::pow(1.0 + r2 / (2.0 * spec.alpha), -spec.alpha) / spec.tau;
}

double eval_matern(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec) {
  const double r2 = scaled_sqdist(xi, xj, spec);
  const double z = std::sqrt(2.0 * spec.nu * r2);
  double shape;
  if (spec.nu == 0.5) {
    shape = std::exp(-z);
  } else if (spec.nu == 1.5) {
    shape = (1.0 + z) * std::exp(-z);
  } else if (spec.nu == 2.5) {
    shape = (1.0 + z + z * z / 3.0) * std::exp(-z);
  } else {
    throw ConfigError("Matern nu = " + std::to_string(spec.nu) +
                      " unsupported; closed forms exist for 1/2, 3/2, 5/2");
  }
  return shape / spec.tau;
}

double eval_kernel(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::SE: return eval_se(xi, xj, spec);
    case KernelFamily::RQ: return eval_rq(xi, xj, spec);
    case KernelFamily::Matern: return eval_matern(xi, xj, spec);
  }
  throw ConfigError("unknown kernel family");
}

namespace {

template <bool Parallel>
CovMatrix build_cov_impl(const Eigen::MatrixXd& X, const KernelSpec& spec, double jitter) {
  if (X.cols() < 1) throw InputError("build_cov needs at least one input point");
  if (jitter < 0.0) throw InputError("jitter must be nonnegative");
  spec.validate(static_cast<int>(X.rows()));
  const Eigen::Index n = X.cols();
  CovMatrix cov;
  cov.jitter = jitter;
  cov.entries.resize(n, n);
  const double diag = 1.0 / spec.tau + jitter;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (Parallel && n > 32)
#endif
  for (Eigen::Index i = 0; i < n; ++i) {
    cov.entries(i, i) = diag;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = eval_kernel(X.col(i), X.col(j), spec);
      cov.entries(i, j) = v;
      cov.entries(j, i) = v;
    }
  }
  return cov;
}

}  // namespace

CovMatrix build_cov(const Eigen::MatrixXd& X, const KernelSpec& spec, double jitter) {
  return build_cov_impl<true>(X, spec, jitter);
}

CovMatrix build_cov_serial(const Eigen::MatrixXd& X, const KernelSpec& spec, double jitter) {
  return build_cov_impl<false>(X, spec, jitter);
}

}  // namespace bits
