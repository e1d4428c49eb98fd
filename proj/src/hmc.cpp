#include "bits/hmc.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bits/errors.hpp"

namespace bits {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Chain run_single_chain(const LogDensity& logp, const GradientFn& grad, const HMCConfig& cfg,
                       Eigen::VectorXd q, const ConstrainFn& constrain, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Chain chain;
  chain.seed = seed;
  chain.draws.reserve(cfg.num_samples - cfg.burn_in);

  double eps = cfg.step_size;
  double current_logp = logp(q);
  if (!std::isfinite(current_logp))
    throw NumericalError("HMC initial position has non-finite log density");

  int accepted_post = 0;
  for (int it = 0; it < cfg.num_samples; ++it) {
    Eigen::VectorXd p(q.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) p[k] = normal(rng);

    const double h0 = -current_logp + 0.5 * p.squaredNorm();

    // Leapfrog trajectory.
    Eigen::VectorXd q_new = q;
    Eigen::VectorXd g = grad(q_new);
    Eigen::VectorXd p_new = p + 0.5 * eps * g;
    bool diverged = !g.allFinite();
    for (int l = 0; l < cfg.leapfrog_steps && !diverged; ++l) {
      q_new += eps * p_new;
      g = grad(q_new);
      if (!g.allFinite()) { diverged = true; break; }
      p_new += (l + 1 < cfg.leapfrog_steps ? eps : 0.5 * eps) * g;
    }

    double accept_prob = 0.0;
    double proposal_logp = kNegInf;
    if (!diverged) {
      proposal_logp = logp(q_new);
      if (std::isfinite(proposal_logp)) {
        const double h1 = -proposal_logp + 0.5 * p_new.squaredNorm();
        accept_prob = std::min(1.0, std::exp(h0 - h1));
      }
    }

    if (unif(rng) < accept_prob) {
      q = q_new;
      current_logp = proposal_logp;
      if (it >= cfg.burn_in) ++accepted_post;
    }

    if (it < cfg.adapt_steps)
      eps *= std::exp(cfg.adapt_rate * (accept_prob - cfg.target_accept));

    if (it >= cfg.burn_in)
      chain.draws.push_back(constrain ? constrain(q) : q);
  }

  const int post = cfg.num_samples - cfg.burn_in;
  chain.acceptance_rate = post > 0 ? static_cast<double>(accepted_post) / post : 0.0;
  chain.adapted_step_size = eps;
  if (post > 0 && accepted_post == 0)
    throw NumericalError("HMC chain rejected every proposal after warm-up; "
                         "try a smaller step size");
  return chain;
}

}  // namespace

void HMCConfig::validate() const {
  if (step_size <= 0.0) throw InputError("HMC step size must be positive");
  if (leapfrog_steps < 1) throw InputError("HMC needs at least one leapfrog step");
  if (num_samples < 1) throw InputError("HMC num_samples must be positive");
  if (burn_in < 0 || burn_in >= num_samples)
    throw InputError("HMC burn_in must satisfy 0 <= burn_in < num_samples");
  if (num_chains < 1) throw InputError("HMC needs at least one chain");
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw InputError("HMC target_accept must lie in (0, 1)");
}

int ChainSet::total_draws() const {
  int n = 0;
  for (const auto& c : chains) n += static_cast<int>(c.draws.size());
  return n;
}

std::vector<std::vector<double>> ChainSet::coordinate(int k) const {
  std::vector<std::vector<double>> out;
  out.reserve(chains.size());
  for (const auto& c : chains) {
    std::vector<double> series;
    series.reserve(c.draws.size());
    for (const auto& d : c.draws) series.push_back(d[k]);
    out.push_back(std::move(series));
  }
  return out;
}

ChainSet hmc_run(const LogDensity& logp, const GradientFn& grad, const HMCConfig& cfg,
                 const std::vector<Eigen::VectorXd>& inits, const ConstrainFn& constrain) {
  cfg.validate();
  if (static_cast<int>(inits.size()) != cfg.num_chains)
    throw InputError("hmc_run needs one initial position per chain");

  ChainSet set;
  set.chains.resize(cfg.num_chains);
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1) if (cfg.num_chains > 1)
#endif
  for (int c = 0; c < cfg.num_chains; ++c) {
    try {
      set.chains[c] = run_single_chain(logp, grad, cfg, inits[c], constrain,
                                       cfg.seed + 1000003ull * static_cast<std::uint64_t>(c));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return set;
}

Eigen::VectorXd fd_gradient(const LogDensity& logp, const Eigen::VectorXd& u, double h) {
  Eigen::VectorXd g(u.size());
  Eigen::VectorXd v = u;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    v[k] = u[k] + h;
    const double fp = logp(v);
    v[k] = u[k] - h;
    const double fm = logp(v);
    v[k] = u[k];
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  const int m = static_cast<int>(chains.size());
  if (m < 2) throw InputError("Gelman-Rubin statistic needs at least two chains");
  const std::size_t n = chains.front().size();
  if (n < 2) throw InputError("Gelman-Rubin statistic needs chain length >= 2");
  for (const auto& c : chains)
    if (c.size() != n) throw InputError("Gelman-Rubin chains must have equal lengths");

  std::vector<double> means(m);
  double grand = 0.0;
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (double v : chains[j]) s += v;
    means[j] = s / static_cast<double>(n);
    grand += means[j];
  }
  grand /= m;

  double within = 0.0;
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (double v : chains[j]) s += (v - means[j]) * (v - means[j]);
    within += s / static_cast<double>(n - 1);
  }
  within /= m;

  double between = 0.0;  // B = n/(m-1) sum (mean_j - grand)^2
  for (int j = 0; j < m; ++j) between += (means[j] - grand) * (means[j] - grand);
  between *= static_cast<double>(n) / (m - 1);

  if (within == 0.0)
    return between > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double nd = static_cast<double>(n);
  return std::sqrt((within * (nd - 1.0) / nd + between / nd) / within);
}

std::vector<Eigen::VectorXd> select_components(const ChainSet& chains, int S) {
  if (S < 1) throw InputError("select_components needs S >= 1");
  const int total = chains.total_draws();
  if (total < S)
    throw InputError("select_components: only " + std::to_string(total) +
                     " draws available for S = " + std::to_string(S));
  std::vector<const Eigen::VectorXd*> flat;
  flat.reserve(total);
  for (const auto& c : chains.chains)
    for (const auto& d : c.draws) flat.push_back(&d);

  std::vector<Eigen::VectorXd> out;
  out.reserve(S);
  for (int k = 0; k < S; ++k) {
    const auto idx = static_cast<std::size_t>((k + 0.5) * total / S);
    out.push_back(*flat[std::min(idx, flat.size() - 1)]);
  }
  return out;
}

}  // namespace bits
