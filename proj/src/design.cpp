#include "bits/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bits/entropy.hpp"
#include "bits/errors.hpp"

namespace bits {

namespace {

// splitmix64-style mixing for deriving per-stage seeds from the master seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

void DesignSpace::validate() const {
  if (lower.size() != upper.size() || static_cast<int>(transforms.size()) != dim())
    throw InputError("design space bounds/transforms have mismatched dimensions");
  for (int k = 0; k < dim(); ++k) {
    if (!(lower[k] < upper[k])) throw InputError("design space needs lower < upper per axis");
    if (transforms[k] == AxisTransform::Divide &&
        (divide_factors.size() != dim() || divide_factors[k] == 0.0))
      throw InputError("Divide axis needs a nonzero factor");
  }
}

Eigen::VectorXd DesignSpace::to_model(const Eigen::VectorXd& raw) const {
  Eigen::VectorXd m(raw.size());
  for (int k = 0; k < dim(); ++k)
    m[k] = transforms[k] == AxisTransform::Divide
               ? raw[k] / divide_factors[k]
               : (raw[k] - lower[k]) / (upper[k] - lower[k]);
  return m;
}

Eigen::VectorXd DesignSpace::from_model(const Eigen::VectorXd& model) const {
  Eigen::VectorXd r(model.size());
  for (int k = 0; k < dim(); ++k)
    r[k] = transforms[k] == AxisTransform::Divide
               ? model[k] * divide_factors[k]
               : lower[k] + model[k] * (upper[k] - lower[k]);
  return r;
}

bool DesignSpace::contains(const Eigen::VectorXd& raw, double tol) const {
  for (int k = 0; k < dim(); ++k)
    if (raw[k] < lower[k] - tol || raw[k] > upper[k] + tol) return false;
  return true;
}

DesignSpace DesignSpace::case_study() {
  DesignSpace s;
  s.lower = Eigen::Vector2d(0.0, 350.0);
  s.upper = Eigen::Vector2d(1.0, 367.0);
  s.transforms = {AxisTransform::Divide, AxisTransform::MinMax};
  s.divide_factors = Eigen::Vector2d(10.0, 1.0);
  return s;
}

std::vector<Eigen::VectorXd> lhs_init(int n, const DesignSpace& space, std::uint64_t seed) {
  if (n < 1) throw InputError("lhs_init needs n >= 1");
  space.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = space.dim();

  std::vector<std::vector<int>> perms(d);
  for (int k = 0; k < d; ++k) {
    perms[k].resize(n);
    std::iota(perms[k].begin(), perms[k].end(), 0);
    std::shuffle(perms[k].begin(), perms[k].end(), rng);
  }
  std::vector<Eigen::VectorXd> points(n, Eigen::VectorXd(d));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) {
      const double u = (perms[k][i] + unif(rng)) / n;
      points[i][k] = space.lower[k] + u * (space.upper[k] - space.lower[k]);
    }
  return points;
}

std::vector<Eigen::VectorXd> sobol_sequence(int n, int dim) {
  if (dim < 1 || dim > 6) throw InputError("sobol_sequence supports 1..6 dimensions");
  if (n < 1) throw InputError("sobol_sequence needs n >= 1");
  // Joe-Kuo primitive polynomials and initial direction numbers, dims 2..6.
  static const int kDegree[5] = {1, 2, 3, 3, 4};
  static const int kPoly[5] = {0, 1, 1, 2, 1};
  static const int kInit[5][4] = {{1, 0, 0, 0}, {1, 3, 0, 0}, {1, 3, 1, 0},
                                  {1, 1, 1, 0}, {1, 1, 3, 3}};
  constexpr int kBits = 30;

  std::vector<std::vector<std::uint32_t>> v(dim, std::vector<std::uint32_t>(kBits + 1));
  for (int i = 1; i <= kBits; ++i) v[0][i] = 1u << (kBits - i);  // van der Corput
  for (int j = 1; j < dim; ++j) {
    const int s = kDegree[j - 1];
    const int a = kPoly[j - 1];
    for (int i = 1; i <= s && i <= kBits; ++i)
      v[j][i] = static_cast<std::uint32_t>(kInit[j - 1][i - 1]) << (kBits - i);
    for (int i = s + 1; i <= kBits; ++i) {
      v[j][i] = v[j][i - s] ^ (v[j][i - s] >> s);
      for (int k = 1; k < s; ++k)
        if ((a >> (s - 1 - k)) & 1) v[j][i] ^= v[j][i - k];
    }
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  std::vector<std::uint32_t> x(dim, 0);
  for (int i = 1; i <= n; ++i) {
    // Gray-code index: position of the lowest zero bit of i-1.
    unsigned c = 1;
    for (unsigned value = i - 1; value & 1; value >>= 1) ++c;
    Eigen::VectorXd p(dim);
    for (int j = 0; j < dim; ++j) {
      x[j] ^= v[j][c];
      p[j] = static_cast<double>(x[j]) / (1u << kBits);
    }
    out.push_back(p);
  }
  return out;
}

std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> split_train_test(
    const std::vector<Eigen::VectorXd>& points, std::uint64_t seed) {
  if (points.size() < 2) throw InputError("split_train_test needs at least two points");
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::size_t n_train = (points.size() + 1) / 2;
  std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> out;
  for (std::size_t i = 0; i < idx.size(); ++i)
    (i < n_train ? out.first : out.second).push_back(points[idx[i]]);
  return out;
}

double entropy_at(const MixturePosterior& mix, const Eigen::VectorXd& model_point,
                  EntropyEstimator estimator) {
  const MixtureAtPoint at = mix.at(model_point);
  switch (estimator) {
    case EntropyEstimator::Taylor2: return taylor_entropy(at, 2);
    case EntropyEstimator::Taylor4: return taylor_entropy(at, 4);
    case EntropyEstimator::LowerBound: return entropy_lower_bound(at);
  }
  throw ConfigError("unknown entropy estimator");
}

namespace {

template <bool Parallel>
std::vector<double> entropy_field_impl(const MixturePosterior& mix,
                                       const std::vector<Eigen::VectorXd>& grid,
                                       EntropyEstimator estimator) {
  if (grid.empty()) throw InputError("entropy_field needs a nonempty grid");
  std::vector<double> values(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (Parallel)
#endif
  for (std::size_t i = 0; i < grid.size(); ++i)
    values[i] = entropy_at(mix, grid[i], estimator);
  return values;
}

}  // namespace

std::vector<double> entropy_field(const MixturePosterior& mix,
                                  const std::vector<Eigen::VectorXd>& grid,
                                  EntropyEstimator estimator) {
  return entropy_field_impl<true>(mix, grid, estimator);
}

std::vector<double> entropy_field_serial(const MixturePosterior& mix,
                                         const std::vector<Eigen::VectorXd>& grid,
                                         EntropyEstimator estimator) {
  return entropy_field_impl<false>(mix, grid, estimator);
}

namespace {

// Bound-constrained compass (pattern) search; derivative-free, monotone.
std::pair<Eigen::VectorXd, double> compass_ascent(
    const std::function<double(const Eigen::VectorXd&)>& objective, Eigen::VectorXd x,
    const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd step = 0.25 * (hi - lo);
  double fx = objective(x);
  const double min_step = 1e-7 * (hi - lo).maxCoeff();
  while (step.maxCoeff() > min_step) {
    bool improved = false;
    for (int k = 0; k < d; ++k) {
      for (double dir : {+1.0, -1.0}) {
        Eigen::VectorXd trial = x;
        trial[k] = std::clamp(trial[k] + dir * step[k], lo[k], hi[k]);
        if (trial[k] == x[k]) continue;
        const double ft = objective(trial);
        if (ft > fx) {
          x = trial;
          fx = ft;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {x, fx};
}

}  // namespace

AcquisitionResult maximize_entropy(const MixturePosterior& mix, const DesignSpace& space,
                                   EntropyEstimator estimator, int restarts,
                                   std::uint64_t seed) {
  if (restarts < 1) throw InputError("maximize_entropy needs at least one restart");
  space.validate();
  (void)seed;  // Sobol starts are deterministic; seed kept for interface stability
  const Eigen::VectorXd lo = space.to_model(space.lower);
  const Eigen::VectorXd hi = space.to_model(space.upper);
  const auto objective = [&](const Eigen::VectorXd& p) { return entropy_at(mix, p, estimator); };

  const auto starts = sobol_sequence(restarts, space.dim());
  Eigen::VectorXd best_x;
  double best_f = -std::numeric_limits<double>::infinity();
  int failures = 0;
  for (const auto& s : starts) {
    const Eigen::VectorXd x0 = lo.array() + s.array() * (hi - lo).array();
    try {
      const auto [x, f] = compass_ascent(objective, x0, lo, hi);
      if (f > best_f) {
        best_f = f;
        best_x = x;
      }
    } catch (const std::exception&) {
      ++failures;  // skip this start
    }
  }
  if (failures == restarts || best_x.size() == 0)
    throw NumericalError("entropy maximization failed from every start");
  return {space.from_model(best_x), best_f};
}

MetricSamples rmse_mae(const MixturePosterior& mix, const Dataset& dataset, int n_realizations,
                       std::uint64_t seed) {
  if (dataset.size() == 0) throw InputError("rmse_mae needs a nonempty dataset");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, mix.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = dataset.size();

  // Cache component predictive marginals at the dataset inputs.
  std::vector<MixtureAtPoint> at_points;
  at_points.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) at_points.push_back(mix.at(dataset.X.col(i), 0.0));

  MetricSamples out;
  out.rmse.reserve(n_realizations);
  out.mae.reserve(n_realizations);
  for (int r = 0; r < n_realizations; ++r) {
    const int s = pick(rng);
    double sq = 0.0, ab = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double draw = at_points[i].means[s] +
                          std::sqrt(at_points[i].vars[s]) * normal(rng);
      const double e = draw - dataset.y[i];
      sq += e * e;
      ab += std::abs(e);
    }
    out.rmse.push_back(std::sqrt(sq / n));
    out.mae.push_back(ab / n);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Dataset DesignHistory::train_dataset() const {
  Dataset d;
  const int dim = config.space.dim();
  d.X.resize(dim, static_cast<Eigen::Index>(train_points.size()));
  d.y.resize(static_cast<Eigen::Index>(train_obs.size()));
  for (std::size_t i = 0; i < train_points.size(); ++i) {
    d.X.col(static_cast<Eigen::Index>(i)) = config.space.to_model(train_points[i]);
    d.y[static_cast<Eigen::Index>(i)] = train_obs[i];
  }
  return d;
}

Dataset DesignHistory::test_dataset() const {
  Dataset d;
  const int dim = config.space.dim();
  d.X.resize(dim, static_cast<Eigen::Index>(initial_test.size()));
  d.y.resize(static_cast<Eigen::Index>(test_obs.size()));
  for (std::size_t i = 0; i < initial_test.size(); ++i) {
    d.X.col(static_cast<Eigen::Index>(i)) = config.space.to_model(initial_test[i]);
    d.y[static_cast<Eigen::Index>(i)] = test_obs[i];
  }
  return d;
}

DesignHistory initialize_history(const Oracle& oracle, const DesignConfig& config) {
  config.space.validate();
  DesignHistory h;
  h.config = config;
  const auto points = lhs_init(config.n_init, config.space, mix_seed(config.seed, 1));
  auto [train, test] = split_train_test(points, mix_seed(config.seed, 2));
  h.initial_train = train;
  h.initial_test = test;
  h.train_points = train;
  for (const auto& p : train) h.train_obs.push_back(oracle(p));
  for (const auto& p : test) h.test_obs.push_back(oracle(p));
  return h;
}

namespace {

std::vector<Eigen::VectorXd> model_grid(const DesignSpace& space, int grid_n) {
  const Eigen::VectorXd lo = space.to_model(space.lower);
  const Eigen::VectorXd hi = space.to_model(space.upper);
  std::vector<Eigen::VectorXd> grid;
  grid.reserve(static_cast<std::size_t>(grid_n) * grid_n);
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      Eigen::VectorXd p(2);
      p[0] = lo[0] + (hi[0] - lo[0]) * i / (grid_n - 1);
      p[1] = lo[1] + (hi[1] - lo[1]) * j / (grid_n - 1);
      grid.push_back(p);
    }
  return grid;
}

}  // namespace

void bits_iterate(DesignHistory& history, const Oracle& oracle) {
  const DesignConfig& cfg = history.config;
  const int iter = static_cast<int>(history.records.size()) + 1;

  IterationRecord rec;
  rec.iteration = iter;

  const Dataset train = history.train_dataset();

  GPPosterior posterior{train, cfg.kernel_template, cfg.priors, cfg.noise_var, 0.0};
  HMCConfig hmc = cfg.hmc;
  hmc.seed = mix_seed(cfg.seed, 10, static_cast<std::uint64_t>(iter));
  rec.chains = posterior.run_inference(hmc);

  rec.rhat.resize(posterior.dim());
  for (int k = 0; k < posterior.dim(); ++k)
    rec.rhat[k] = gelman_rubin(rec.chains.coordinate(k));

  rec.hyper_draws = select_components(rec.chains, cfg.mixture_size);
  std::vector<GPState> components;
  components.reserve(rec.hyper_draws.size());
  for (const auto& theta : rec.hyper_draws)
    components.emplace_back(train, posterior.kernel_for(theta), cfg.noise_var, 0.0);
  const MixturePosterior mix(std::move(components));

  rec.train_metrics = rmse_mae(mix, train, cfg.metric_realizations,
                               mix_seed(cfg.seed, 20, static_cast<std::uint64_t>(iter)));
  rec.test_metrics = rmse_mae(mix, history.test_dataset(), cfg.metric_realizations,
                              mix_seed(cfg.seed, 21, static_cast<std::uint64_t>(iter)));

  rec.entropy_grid = entropy_field(mix, model_grid(cfg.space, cfg.grid_n), cfg.estimator);

  const AcquisitionResult acq =
      maximize_entropy(mix, cfg.space, cfg.estimator, cfg.restarts,
                       mix_seed(cfg.seed, 30, static_cast<std::uint64_t>(iter)));
  rec.selected = acq.point;
  rec.max_entropy = acq.value;
  rec.min_information = -acq.value;

  rec.observed = oracle(rec.selected);
  history.train_points.push_back(rec.selected);
  history.train_obs.push_back(rec.observed);
  history.records.push_back(std::move(rec));
}

bool stopping_check(const DesignHistory& history) {
  if (history.records.empty()) throw InputError("stopping_check needs at least one iteration");
  if (static_cast<int>(history.records.size()) >= history.config.max_iters) return true;
  const IterationRecord& last = history.records.back();
  const double rmse_gap =
      std::abs(median(last.test_metrics.rmse) - median(last.train_metrics.rmse));
  const double mae_gap =
      std::abs(median(last.test_metrics.mae) - median(last.train_metrics.mae));
  return rmse_gap < history.config.tol_rmse && mae_gap < history.config.tol_mae;
}

DesignHistory run_design(const Oracle& oracle, const DesignConfig& config) {
  DesignHistory history = initialize_history(oracle, config);
  while (static_cast<int>(history.records.size()) < config.max_iters) {
    bits_iterate(history, oracle);
    if (stopping_check(history)) break;
  }
  return history;
}

}  // namespace bits
