#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "bits/design.hpp"
#include "bits/errors.hpp"
#include "bits/io.hpp"

namespace bits {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> axis_names(const DesignSpace& space) {
  if (space.dim() == 2) return {"z", "T"};
  std::vector<std::string> names;
  for (int k = 0; k < space.dim(); ++k) names.push_back("x" + std::to_string(k + 1));
  return names;
}

std::string estimator_name(EntropyEstimator e) {
  switch (e) {
    case EntropyEstimator::Taylor2: return "taylor2";
    case EntropyEstimator::Taylor4: return "taylor4";
    case EntropyEstimator::LowerBound: return "lower_bound";
  }
  throw ConfigError("unknown entropy estimator");
}

EntropyEstimator estimator_from(const std::string& s) {
  if (s == "taylor2") return EntropyEstimator::Taylor2;
  if (s == "taylor4") return EntropyEstimator::Taylor4;
  if (s == "lower_bound") return EntropyEstimator::LowerBound;
  throw ConfigError("unknown entropy estimator name: " + s);
}

std::string kernel_family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::SE: return "se";
    case KernelFamily::RQ: return "rq";
    case KernelFamily::Matern: return "matern";
  }
  throw ConfigError("unknown kernel family");
}

KernelFamily kernel_family_from(const std::string& s) {
  if (s == "se") return KernelFamily::SE;
  if (s == "rq") return KernelFamily::RQ;
  if (s == "matern") return KernelFamily::Matern;
  throw ConfigError("unknown kernel family name: " + s);
}

json config_to_json(const DesignConfig& cfg) {
  json j;
  j["schema_version"] = 1;
  json space;
  space["lower"] = std::vector<double>(cfg.space.lower.begin(), cfg.space.lower.end());
  space["upper"] = std::vector<double>(cfg.space.upper.begin(), cfg.space.upper.end());
  std::vector<std::string> tr;
  for (auto t : cfg.space.transforms)
    tr.push_back(t == AxisTransform::Divide ? "divide" : "minmax");
  space["transforms"] = tr;
  space["divide_factors"] =
      std::vector<double>(cfg.space.divide_factors.begin(), cfg.space.divide_factors.end());
  j["space"] = space;

  json hmc;
  hmc["step_size"] = cfg.hmc.step_size;
  hmc["leapfrog_steps"] = cfg.hmc.leapfrog_steps;
  hmc["num_samples"] = cfg.hmc.num_samples;
  hmc["burn_in"] = cfg.hmc.burn_in;
  hmc["num_chains"] = cfg.hmc.num_chains;
  hmc["adapt_steps"] = cfg.hmc.adapt_steps;
  hmc["adapt_rate"] = cfg.hmc.adapt_rate;
  hmc["target_accept"] = cfg.hmc.target_accept;
  j["hmc"] = hmc;

  json priors = json::array();
  for (const auto& p : cfg.priors) {
    json pj;
    pj["name"] = p.name;
    pj["family"] = p.family == PriorFamily::Gamma ? "gamma" : "uniform";
    pj["a"] = p.a;
    pj["b"] = p.b;
    priors.push_back(pj);
  }
  j["priors"] = priors;

  json kernel;
  kernel["family"] = kernel_family_name(cfg.kernel_template.family);
  kernel["tau"] = cfg.kernel_template.tau;
  kernel["length_scales"] = cfg.kernel_template.length_scales;
  kernel["alpha"] = cfg.kernel_template.alpha;
  kernel["nu"] = cfg.kernel_template.nu;
  j["kernel"] = kernel;

  j["noise_var"] = cfg.noise_var;
  j["mixture_size"] = cfg.mixture_size;
  j["restarts"] = cfg.restarts;
  j["max_iters"] = cfg.max_iters;
  j["n_init"] = cfg.n_init;
  j["grid_n"] = cfg.grid_n;
  j["metric_realizations"] = cfg.metric_realizations;
  j["tol_rmse"] = cfg.tol_rmse;
  j["tol_mae"] = cfg.tol_mae;
  j["estimator"] = estimator_name(cfg.estimator);
  j["seed"] = cfg.seed;
  return j;
}

DesignConfig config_from_json(const json& j) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
    throw ConfigError("unsupported history schema version");
  DesignConfig cfg;
  const json& space = j.at("space");
  const auto lower = space.at("lower").get<std::vector<double>>();
  const auto upper = space.at("upper").get<std::vector<double>>();
  const auto factors = space.at("divide_factors").get<std::vector<double>>();
  cfg.space.lower = Eigen::Map<const Eigen::VectorXd>(lower.data(), lower.size());
  cfg.space.upper = Eigen::Map<const Eigen::VectorXd>(upper.data(), upper.size());
  cfg.space.divide_factors = Eigen::Map<const Eigen::VectorXd>(factors.data(), factors.size());
  cfg.space.transforms.clear();
  for (const auto& t : space.at("transforms")) {
    const std::string name = t.get<std::string>();
    if (name == "divide") cfg.space.transforms.push_back(AxisTransform::Divide);
    else if (name == "minmax") cfg.space.transforms.push_back(AxisTransform::MinMax);
    else throw ConfigError("unknown axis transform: " + name);
  }

  const json& hmc = j.at("hmc");
  cfg.hmc.step_size = hmc.at("step_size").get<double>();
  cfg.hmc.leapfrog_steps = hmc.at("leapfrog_steps").get<int>();
  cfg.hmc.num_samples = hmc.at("num_samples").get<int>();
  cfg.hmc.burn_in = hmc.at("burn_in").get<int>();
  cfg.hmc.num_chains = hmc.at("num_chains").get<int>();
  cfg.hmc.adapt_steps = hmc.at("adapt_steps").get<int>();
  cfg.hmc.adapt_rate = hmc.at("adapt_rate").get<double>();
  cfg.hmc.target_accept = hmc.at("target_accept").get<double>();

  cfg.priors.clear();
  for (const auto& pj : j.at("priors")) {
    Prior p;
    p.name = pj.at("name").get<std::string>();
    const std::string fam = pj.at("family").get<std::string>();
    if (fam == "gamma") p.family = PriorFamily::Gamma;
    else if (fam == "uniform") p.family = PriorFamily::Uniform;
    else throw ConfigError("unknown prior family: " + fam);
    p.a = pj.at("a").get<double>();
    p.b = pj.at("b").get<double>();
    cfg.priors.push_back(p);
  }

  const json& kernel = j.at("kernel");
  cfg.kernel_template.family = kernel_family_from(kernel.at("family").get<std::string>());
  cfg.kernel_template.tau = kernel.at("tau").get<double>();
  cfg.kernel_template.length_scales = kernel.at("length_scales").get<std::vector<double>>();
  cfg.kernel_template.alpha = kernel.at("alpha").get<double>();
  cfg.kernel_template.nu = kernel.at("nu").get<double>();

  cfg.noise_var = j.at("noise_var").get<double>();
  cfg.mixture_size = j.at("mixture_size").get<int>();
  cfg.restarts = j.at("restarts").get<int>();
  cfg.max_iters = j.at("max_iters").get<int>();
  cfg.n_init = j.at("n_init").get<int>();
  cfg.grid_n = j.at("grid_n").get<int>();
  cfg.metric_realizations = j.at("metric_realizations").get<int>();
  cfg.tol_rmse = j.at("tol_rmse").get<double>();
  cfg.tol_mae = j.at("tol_mae").get<double>();
  cfg.estimator = estimator_from(j.at("estimator").get<std::string>());
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

std::vector<std::string> theta_names(int dim) {
  std::vector<std::string> names;
  for (int k = 1; k <= dim; ++k) names.push_back("theta" + std::to_string(k));
  return names;
}

double parse_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw InputError("malformed numeric field in history file: '" + s + "'");
  }
}

}  // namespace

void save_history(const DesignHistory& history, const std::string& dir) {
  fs::create_directories(dir);
  const DesignConfig& cfg = history.config;
  const auto axes = axis_names(cfg.space);
  const int dim = cfg.space.dim();

  {
    std::ofstream out(dir + "/config.json");
    if (!out) throw InputError("cannot write " + dir + "/config.json");
    out << config_to_json(cfg).dump(2) << "\n";
  }

  {
    CsvTable t;
    t.header = {"iteration"};
    t.header.insert(t.header.end(), axes.begin(), axes.end());
    t.header.push_back("log_gamma");
    t.header.push_back("split");
    auto push = [&](int iter, const Eigen::VectorXd& p, double obs, const std::string& split) {
      std::vector<std::string> row{std::to_string(iter)};
      for (int k = 0; k < dim; ++k) row.push_back(format_double(p[k]));
      row.push_back(format_double(obs));
      row.push_back(split);
      t.rows.push_back(std::move(row));
    };
    for (std::size_t i = 0; i < history.initial_train.size(); ++i)
      push(0, history.initial_train[i], history.train_obs[i], "train");
    for (std::size_t i = 0; i < history.initial_test.size(); ++i)
      push(0, history.initial_test[i], history.test_obs[i], "test");
    for (const auto& rec : history.records)
      push(rec.iteration, rec.selected, rec.observed, "train");
    write_csv(dir + "/design.csv", t);
  }

  {
    CsvTable t;
    t.header = {"iteration", "statistic", "value"};
    for (const auto& rec : history.records) {
      const std::string it = std::to_string(rec.iteration);
      auto push = [&](const std::string& name, double v) {
        t.rows.push_back({it, name, format_double(v)});
      };
      push("max_entropy", rec.max_entropy);
      push("min_information", rec.min_information);
      for (std::size_t k = 0; k < rec.rhat.size(); ++k)
        push("rhat_theta" + std::to_string(k + 1), rec.rhat[k]);
      for (std::size_t r = 0; r < rec.train_metrics.rmse.size(); ++r)
        push("rmse_train_" + std::to_string(r), rec.train_metrics.rmse[r]);
      for (std::size_t r = 0; r < rec.train_metrics.mae.size(); ++r)
        push("mae_train_" + std::to_string(r), rec.train_metrics.mae[r]);
      for (std::size_t r = 0; r < rec.test_metrics.rmse.size(); ++r)
        push("rmse_test_" + std::to_string(r), rec.test_metrics.rmse[r]);
      for (std::size_t r = 0; r < rec.test_metrics.mae.size(); ++r)
        push("mae_test_" + std::to_string(r), rec.test_metrics.mae[r]);
    }
    write_csv(dir + "/metrics.csv", t);
  }

  for (const auto& rec : history.records) {
    const std::string suffix = "_" + std::to_string(rec.iteration) + ".csv";

    {
      CsvTable t;
      t.header = axes;
      t.header.push_back("H");
      const Eigen::VectorXd lo = cfg.space.lower;
      const Eigen::VectorXd hi = cfg.space.upper;
      std::size_t idx = 0;
      for (int i = 0; i < cfg.grid_n; ++i)
        for (int jj = 0; jj < cfg.grid_n; ++jj) {
          Eigen::VectorXd p(2);
          p[0] = lo[0] + (hi[0] - lo[0]) * i / (cfg.grid_n - 1);
          p[1] = lo[1] + (hi[1] - lo[1]) * jj / (cfg.grid_n - 1);
          t.rows.push_back({format_double(p[0]), format_double(p[1]),
                            format_double(rec.entropy_grid[idx++])});
        }
      write_csv(dir + "/entropy_grid" + suffix, t);
    }

    {
      CsvTable t;
      t.header = {"chain", "iteration"};
      const auto names = theta_names(static_cast<int>(cfg.priors.size()));
      t.header.insert(t.header.end(), names.begin(), names.end());
      t.header.push_back("accept_prob");
      for (std::size_t c = 0; c < rec.chains.chains.size(); ++c) {
        const Chain& chain = rec.chains.chains[c];
        for (std::size_t d = 0; d < chain.draws.size(); ++d) {
          std::vector<std::string> row{std::to_string(c + 1), std::to_string(d + 1)};
          for (Eigen::Index k = 0; k < chain.draws[d].size(); ++k)
            row.push_back(format_double(chain.draws[d][k]));
          row.push_back(format_double(chain.acceptance_rate));
          t.rows.push_back(std::move(row));
        }
      }
      write_csv(dir + "/chains" + suffix, t);
    }

    {
      CsvTable t;
      t.header = theta_names(static_cast<int>(cfg.priors.size()));
      for (const auto& theta : rec.hyper_draws) {
        std::vector<std::string> row;
        for (Eigen::Index k = 0; k < theta.size(); ++k) row.push_back(format_double(theta[k]));
        t.rows.push_back(std::move(row));
      }
      write_csv(dir + "/components" + suffix, t);
    }
  }
}

DesignHistory load_history(const std::string& dir) {
  DesignHistory history;
  {
    std::ifstream in(dir + "/config.json");
    if (!in) throw InputError("cannot open " + dir + "/config.json");
    json j;
    in >> j;
    history.config = config_from_json(j);
  }
  const DesignConfig& cfg = history.config;
  const int dim = cfg.space.dim();
  const int n_theta = static_cast<int>(cfg.priors.size());

  int max_iter = 0;
  {
    const CsvTable t = read_csv(dir + "/design.csv");
    const int c_split = t.column("split");
    const int c_obs = t.column("log_gamma");
    if (c_split < 0 || c_obs < 0) throw InputError("design.csv missing required columns");
    for (const auto& row : t.rows) {
      const int iter = std::stoi(row[0]);
      Eigen::VectorXd p(dim);
      for (int k = 0; k < dim; ++k) p[k] = parse_double(row[1 + k]);
      const double obs = parse_double(row[c_obs]);
      if (iter == 0) {
        if (row[c_split] == "train") {
          history.initial_train.push_back(p);
          history.train_obs.push_back(obs);
        } else {
          history.initial_test.push_back(p);
          history.test_obs.push_back(obs);
        }
      } else {
        max_iter = std::max(max_iter, iter);
        if (static_cast<int>(history.records.size()) < iter)
          history.records.resize(iter);
        history.records[iter - 1].iteration = iter;
        history.records[iter - 1].selected = p;
        history.records[iter - 1].observed = obs;
        history.train_obs.push_back(obs);
      }
    }
  }
  history.train_points = history.initial_train;
  for (const auto& rec : history.records) history.train_points.push_back(rec.selected);

  {
    const CsvTable t = read_csv(dir + "/metrics.csv");
    for (const auto& row : t.rows) {
      const int iter = std::stoi(row[0]);
      if (iter < 1 || iter > max_iter) throw InputError("metrics.csv has an unknown iteration");
      IterationRecord& rec = history.records[iter - 1];
      const std::string& name = row[1];
      const double v = parse_double(row[2]);
      if (name == "max_entropy") rec.max_entropy = v;
      else if (name == "min_information") rec.min_information = v;
      else if (name.rfind("rhat_", 0) == 0) rec.rhat.push_back(v);
      else if (name.rfind("rmse_train_", 0) == 0) rec.train_metrics.rmse.push_back(v);
      else if (name.rfind("mae_train_", 0) == 0) rec.train_metrics.mae.push_back(v);
      else if (name.rfind("rmse_test_", 0) == 0) rec.test_metrics.rmse.push_back(v);
      else if (name.rfind("mae_test_", 0) == 0) rec.test_metrics.mae.push_back(v);
      else throw InputError("metrics.csv has an unknown statistic: " + name);
    }
  }

  for (IterationRecord& rec : history.records) {
    const std::string suffix = "_" + std::to_string(rec.iteration) + ".csv";

    {
      const CsvTable t = read_csv(dir + "/entropy_grid" + suffix);
      const int c_h = t.column("H");
      if (c_h < 0) throw InputError("entropy grid file missing the H column");
      for (const auto& row : t.rows) rec.entropy_grid.push_back(parse_double(row[c_h]));
    }

    {
      const CsvTable t = read_csv(dir + "/chains" + suffix);
      for (const auto& row : t.rows) {
        const std::size_t c = static_cast<std::size_t>(std::stoi(row[0]));
        if (c < 1) throw InputError("chain indices are 1-based");
        if (rec.chains.chains.size() < c) rec.chains.chains.resize(c);
        Eigen::VectorXd theta(n_theta);
        for (int k = 0; k < n_theta; ++k) theta[k] = parse_double(row[2 + k]);
        rec.chains.chains[c - 1].draws.push_back(theta);
        rec.chains.chains[c - 1].acceptance_rate = parse_double(row[2 + n_theta]);
      }
    }

    {
      const CsvTable t = read_csv(dir + "/components" + suffix);
      for (const auto& row : t.rows) {
        Eigen::VectorXd theta(n_theta);
        for (int k = 0; k < n_theta; ++k) theta[k] = parse_double(row[k]);
        rec.hyper_draws.push_back(theta);
      }
    }
  }

  return history;
}

}  // namespace bits
