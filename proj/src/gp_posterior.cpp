#include "bits/gp_posterior.hpp"

#include <cmath>
#include <limits>

#include "bits/errors.hpp"

namespace bits {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

KernelSpec GPPosterior::kernel_for(const Eigen::VectorXd& theta) const {
  KernelSpec spec = kernel_template;
  spec.tau = 1.0 / theta[0];
  spec.length_scales.assign(theta.data() + 1, theta.data() + theta.size());
  return spec;
}

Eigen::VectorXd GPPosterior::constrain(const Eigen::VectorXd& u) const {
  Eigen::VectorXd theta(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) theta[k] = priors[k].to_constrained(u[k]);
  return theta;
}

Eigen::VectorXd GPPosterior::unconstrain(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd u(theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) u[k] = priors[k].to_unconstrained(theta[k]);
  return u;
}

double GPPosterior::log_posterior_unconstrained(const Eigen::VectorXd& u) const {
  if (static_cast<int>(u.size()) != dim())
    throw InputError("posterior evaluated at wrong dimension");
  if (!u.allFinite()) return kNegInf;

  double logp = 0.0;
  Eigen::VectorXd theta(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    theta[k] = priors[k].to_constrained(u[k]);
    if (!priors[k].in_support(theta[k])) return kNegInf;
    logp += priors[k].log_pdf(theta[k]) + priors[k].log_jacobian(u[k]);
  }
  try {
    logp += log_marginal_likelihood(dataset, kernel_for(theta), noise_var, mean_const);
  } catch (const NumericalError&) {
    return kNegInf;  // treat factorization failure as zero posterior mass
  }
  return std::isfinite(logp) ? logp : kNegInf;
}

Eigen::VectorXd GPPosterior::gradient(const Eigen::VectorXd& u) const {
  return fd_gradient([this](const Eigen::VectorXd& v) { return log_posterior_unconstrained(v); },
                     u);
}

ChainSet GPPosterior::run_inference(const HMCConfig& config) const {
  config.validate();
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<Eigen::VectorXd> inits;
  inits.reserve(config.num_chains);
  for (int c = 0; c < config.num_chains; ++c) {
    Eigen::VectorXd theta(dim());
    for (int k = 0; k < dim(); ++k) theta[k] = priors[k].sample(rng);
    inits.push_back(unconstrain(theta));
  }
  const LogDensity logp = [this](const Eigen::VectorXd& v) {
    return log_posterior_unconstrained(v);
  };
  const GradientFn grad = [this](const Eigen::VectorXd& v) { return gradient(v); };
  const ConstrainFn cons = [this](const Eigen::VectorXd& v) { return constrain(v); };
  return hmc_run(logp, grad, config, inits, cons);
}

}  // namespace bits
