#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bits/gp_posterior.hpp"
#include "bits/hmc.hpp"
#include "bits/mixture.hpp"

namespace bits {

enum class AxisTransform {
  Divide,  // raw / factor
  MinMax,  // (raw - lower) / (upper - lower)
};

// Rectangular design space in raw units plus the per-axis map into model
// coordinates used for kernel evaluation and acquisition.
struct DesignSpace {
  Eigen::VectorXd lower;  // raw units
  Eigen::VectorXd upper;
  std::vector<AxisTransform> transforms;
  Eigen::VectorXd divide_factors;  // used by Divide axes

  int dim() const { return static_cast<int>(lower.size()); }
  void validate() const;
  Eigen::VectorXd to_model(const Eigen::VectorXd& raw) const;
  Eigen::VectorXd from_model(const Eigen::VectorXd& model) const;
  bool contains(const Eigen::VectorXd& raw, double tol = 0.0) const;

  // PrOH mole fraction in [0,1] divided by 10; temperature in [350, 367] K
  // min-max normalized.
  static DesignSpace case_study();
};

// Standard Latin hypercube: one point per axis-aligned stratum per dimension,
// uniform within strata, in raw units.
std::vector<Eigen::VectorXd> lhs_init(int n, const DesignSpace& space, std::uint64_t seed);

// First n points of a Sobol sequence in [0,1]^dim (dim <= 6), zero skipped.
std::vector<Eigen::VectorXd> sobol_sequence(int n, int dim);

// Disjoint exhaustive random split; odd counts put the extra point in train.
std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> split_train_test(
    const std::vector<Eigen::VectorXd>& points, std::uint64_t seed);

enum class EntropyEstimator { Taylor2, Taylor4, LowerBound };

double entropy_at(const MixturePosterior& mix, const Eigen::VectorXd& model_point,
                  EntropyEstimator estimator);

// Entropy of the predictive mixture at each grid point (model coordinates).
// OpenMP-parallel; the _serial variant is the reference for tests/benchmarks.
std::vector<double> entropy_field(const MixturePosterior& mix,
                                  const std::vector<Eigen::VectorXd>& grid,
                                  EntropyEstimator estimator = EntropyEstimator::Taylor2);
std::vector<double> entropy_field_serial(const MixturePosterior& mix,
                                         const std::vector<Eigen::VectorXd>& grid,
                                         EntropyEstimator estimator = EntropyEstimator::Taylor2);

struct AcquisitionResult {
  Eigen::VectorXd point;  // raw units
  double value = 0.0;     // entropy at the point
};

// Multi-start bounded ascent from Sobol starts; the returned value is at
// least the best start's entropy.
AcquisitionResult maximize_entropy(const MixturePosterior& mix, const DesignSpace& space,
                                   EntropyEstimator estimator = EntropyEstimator::Taylor2,
                                   int restarts = 15, std::uint64_t seed = 0);

// Per-realization RMSE/MAE of surrogate draws against dataset outputs.
// Each realization picks one mixture component uniformly and draws
// independent pointwise Gaussian samples from its predictive marginals.
struct MetricSamples {
  std::vector<double> rmse;
  std::vector<double> mae;
};

MetricSamples rmse_mae(const MixturePosterior& mix, const Dataset& dataset,
                       int n_realizations = 50, std::uint64_t seed = 0);

double median(std::vector<double> values);

// Ground-truth oracle: raw-unit design point -> observation (log gamma).
using Oracle = std::function<double(const Eigen::VectorXd&)>;

struct DesignConfig {
  DesignSpace space = DesignSpace::case_study();
  HMCConfig hmc;
  PriorSpec priors = case_study_priors();
  KernelSpec kernel_template;  // family + fixed shape parameters
  double noise_var = 0.01;
  int mixture_size = 15;
  int restarts = 15;
  int max_iters = 10;
  int n_init = 10;
  int grid_n = 50;               // entropy-map resolution per axis
  int metric_realizations = 50;
  double tol_rmse = 0.05;
  double tol_mae = 0.05;
  EntropyEstimator estimator = EntropyEstimator::Taylor2;
  std::uint64_t seed = 20240901;
};

struct IterationRecord {
  int iteration = 0;  // 1-based
  Eigen::VectorXd selected;  // raw units
  double observed = 0.0;     // oracle value at the selected point
  double max_entropy = 0.0;
  double min_information = 0.0;
  MetricSamples train_metrics;
  MetricSamples test_metrics;
  std::vector<Eigen::VectorXd> hyper_draws;  // the S mixture components
  std::vector<double> rhat;                  // one per hyperparameter
  ChainSet chains;
  std::vector<double> entropy_grid;  // row-major grid_n x grid_n field
};

struct DesignHistory {
  DesignConfig config;
  std::vector<Eigen::VectorXd> initial_train;  // raw units
  std::vector<Eigen::VectorXd> initial_test;
  std::vector<double> train_obs;  // aligned with current train set
  std::vector<double> test_obs;
  std::vector<Eigen::VectorXd> train_points;  // grows by one per iteration
  std::vector<IterationRecord> records;

  Dataset train_dataset() const;  // model coordinates
  Dataset test_dataset() const;
};

// Space-filling initialization + train/test split + oracle evaluation.
DesignHistory initialize_history(const Oracle& oracle, const DesignConfig& config);

// One full cycle: HMC on current training data, mixture build, metrics,
// acquisition, oracle query, augmentation. Appends one record.
void bits_iterate(DesignHistory& history, const Oracle& oracle);

// True once metric medians between train and test agree within tolerance or
// the iteration budget is exhausted.
bool stopping_check(const DesignHistory& history);

// Full loop; runs until stopping_check.
DesignHistory run_design(const Oracle& oracle, const DesignConfig& config);

void save_history(const DesignHistory& history, const std::string& dir);
DesignHistory load_history(const std::string& dir);

}  // namespace bits
