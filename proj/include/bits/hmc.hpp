#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace bits {

struct HMCConfig {
  double step_size = 0.05;
  int leapfrog_steps = 5;
  int num_samples = 5000;
  int burn_in = 3000;
  int num_chains = 4;
  int adapt_steps = 5;         // step-size adaptation window, in transitions
  double adapt_rate = 0.1;
  double target_accept = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Chain {
  std::vector<Eigen::VectorXd> draws;  // post burn-in, constrained space
  double acceptance_rate = 0.0;        // post burn-in
  double adapted_step_size = 0.0;
  std::uint64_t seed = 0;
};

struct ChainSet {
  std::vector<Chain> chains;

  int total_draws() const;
  // Values of one coordinate, one vector per chain (for diagnostics).
  std::vector<std::vector<double>> coordinate(int k) const;
};

using LogDensity = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
// Maps an unconstrained draw to reporting (constrained) space.
using ConstrainFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Leapfrog-based HMC with Metropolis acceptance. Step size is adapted
// multiplicatively toward target_accept during the first adapt_steps
// transitions, then frozen. Chains run independently (OpenMP) from the given
// initial positions; results are identical to a serial run for a fixed seed.
ChainSet hmc_run(const LogDensity& logp, const GradientFn& grad, const HMCConfig& config,
                 const std::vector<Eigen::VectorXd>& inits,
                 const ConstrainFn& constrain = nullptr);

// Central finite-difference gradient, h = 1e-5 per coordinate.
Eigen::VectorXd fd_gradient(const LogDensity& logp, const Eigen::VectorXd& u, double h = 1e-5);

// Classic (split-free) Gelman-Rubin statistic over per-chain scalar series.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

// S draws chosen by uniform stride across the concatenated post-burn-in
// chains: index_k = floor((k + 0.5) * N / S).
std::vector<Eigen::VectorXd> select_components(const ChainSet& chains, int S);

}  // namespace bits
