#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bits/design.hpp"
#include "bits/distillation.hpp"
#include "bits/errors.hpp"
#include "bits/io.hpp"
#include "bits/vle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bits;

namespace {

struct RunConfig {
  DesignConfig design;
  ColumnSpec column;
  std::string system_path = "data/system.json";
  std::string output_dir = "history";
};

EntropyEstimator estimator_from(const std::string& s) {
  if (s == "taylor2") return EntropyEstimator::Taylor2;
  if (s == "taylor4") return EntropyEstimator::Taylor4;
  if (s == "lower_bound") return EntropyEstimator::LowerBound;
  throw ConfigError("unknown entropy estimator: " + s);
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

RunConfig load_run_config(const std::string& path) {
  RunConfig cfg;
  cfg.design.kernel_template.length_scales = {1.0, 1.0};
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1)
    throw ConfigError("unsupported config schema version");

  maybe(j, "system_path", cfg.system_path);
  maybe(j, "output_dir", cfg.output_dir);
  maybe(j, "seed", cfg.design.seed);
  maybe(j, "noise_var", cfg.design.noise_var);
  maybe(j, "mixture_size", cfg.design.mixture_size);
  maybe(j, "restarts", cfg.design.restarts);
  maybe(j, "max_iters", cfg.design.max_iters);
  maybe(j, "n_init", cfg.design.n_init);
  maybe(j, "grid_n", cfg.design.grid_n);
  maybe(j, "metric_realizations", cfg.design.metric_realizations);
  maybe(j, "tol_rmse", cfg.design.tol_rmse);
  maybe(j, "tol_mae", cfg.design.tol_mae);
  if (j.contains("estimator"))
    cfg.design.estimator = estimator_from(j.at("estimator").get<std::string>());
  if (j.contains("hmc")) {
    const json& h = j.at("hmc");
    maybe(h, "step_size", cfg.design.hmc.step_size);
    maybe(h, "leapfrog_steps", cfg.design.hmc.leapfrog_steps);
    maybe(h, "num_samples", cfg.design.hmc.num_samples);
    maybe(h, "burn_in", cfg.design.hmc.burn_in);
    maybe(h, "num_chains", cfg.design.hmc.num_chains);
    maybe(h, "adapt_steps", cfg.design.hmc.adapt_steps);
    maybe(h, "adapt_rate", cfg.design.hmc.adapt_rate);
    maybe(h, "target_accept", cfg.design.hmc.target_accept);
  }
  if (j.contains("column")) {
    const json& c = j.at("column");
    maybe(c, "n_stages", cfg.column.n_stages);
    maybe(c, "reflux_ratio", cfg.column.reflux_ratio);
    maybe(c, "x_distillate", cfg.column.x_distillate);
    maybe(c, "x_bottoms", cfg.column.x_bottoms);
    maybe(c, "x_feed", cfg.column.x_feed);
    maybe(c, "feed_flow", cfg.column.feed_flow);
    maybe(c, "feed_stage", cfg.column.feed_stage);
    maybe(c, "q", cfg.column.q);
  }

  if (const char* env = std::getenv("BITS_SEED")) {
    try {
      cfg.design.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("BITS_SEED is not a valid integer");
    }
  }
  return cfg;
}

Oracle wilson_oracle(const BinarySystem& sys) {
  return [sys](const Eigen::VectorXd& p) {
    return std::log(wilson_gamma(p[0], p[1], sys).first);
  };
}

// Training mixture as it stood when iteration `iter` was computed.
MixturePosterior mixture_at_iteration(const DesignHistory& h, int iter) {
  if (iter < 1 || iter > static_cast<int>(h.records.size()))
    throw InputError("history has no iteration " + std::to_string(iter));
  const DesignConfig& cfg = h.config;
  const std::size_t n = h.initial_train.size() + static_cast<std::size_t>(iter - 1);
  Dataset d;
  d.X.resize(cfg.space.dim(), static_cast<Eigen::Index>(n));
  d.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    d.X.col(static_cast<Eigen::Index>(i)) = cfg.space.to_model(h.train_points[i]);
    d.y[static_cast<Eigen::Index>(i)] = h.train_obs[i];
  }
  GPPosterior post{d, cfg.kernel_template, cfg.priors, cfg.noise_var, 0.0};
  std::vector<GPState> components;
  for (const auto& theta : h.records[iter - 1].hyper_draws)
    components.emplace_back(d, post.kernel_for(theta), cfg.noise_var, 0.0);
  return MixturePosterior(std::move(components));
}

void write_phase_csv(const std::string& path, const std::vector<PhaseRow>& rows) {
  CsvTable t;
  t.header = {"x (mol frac)", "T (K)", "y (mol frac)"};
  for (const auto& r : rows)
    t.rows.push_back({format_double(r.x), format_double(r.t), format_double(r.y)});
  write_csv(path, t);
}

std::vector<PhaseRow> read_phase_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const int cx = t.column("x (mol frac)");
  const int ct = t.column("T (K)");
  const int cy = t.column("y (mol frac)");
  if (cx < 0 || ct < 0 || cy < 0)
    throw InputError("phase CSV " + path + " is missing required columns");
  std::vector<PhaseRow> rows;
  for (const auto& r : t.rows)
    rows.push_back({std::stod(r[cx]), std::stod(r[ct]), std::stod(r[cy])});
  return rows;
}

// Hybrid provider: gamma1 from one mixture component's posterior mean,
// gamma2 closed via Gibbs-Duhem integration at the query temperature.
GammaProvider surrogate_provider(const MixturePosterior& mix, int component,
                                 const DesignSpace& space) {
  return [&mix, component, space](double z1, double t) {
    auto ln_g1 = [&](double z) {
      Eigen::Vector2d raw(z, t);
      return mix.components()[component].predict(space.to_model(raw)).first;
    };
    const double g1 = std::exp(ln_g1(z1));
    const double z_top = std::min(z1, 1.0 - 2e-4);
    if (z_top <= 0.0) return std::make_pair(g1, 1.0);
    constexpr int kGrid = 200;
    GammaCurve curve;
    curve.temperature = t;
    for (int i = 0; i <= kGrid; ++i) {
      const double z = z_top * i / kGrid;
      curve.z1.push_back(z);
      curve.ln_gamma1.push_back(ln_g1(z));
    }
    const double g2 = std::exp(gibbs_duhem_gamma2(curve).back());
    return std::make_pair(g1, g2);
  };
}

int cmd_run(const RunConfig& cfg) {
  const BinarySystem sys = load_system(cfg.system_path);
  const DesignHistory history = run_design(wilson_oracle(sys), cfg.design);
  save_history(history, cfg.output_dir);
  std::cout << "history written to " << cfg.output_dir << " ("
            << history.records.size() << " iterations)\n";
  return 0;
}

int cmd_phase(const RunConfig& cfg, const std::string& provider, int samples, int points,
              const std::string& out_dir) {
  const BinarySystem sys = load_system(cfg.system_path);
  fs::create_directories(out_dir);
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(static_cast<double>(i) / (points - 1));

  if (provider == "wilson" || provider == "ideal") {
    const GammaProvider g = provider == "wilson" ? wilson_provider(sys) : ideal_provider();
    const auto rows = phase_table(grid, g, sys);
    write_phase_csv(out_dir + "/phase_" + provider + ".csv", rows);
    std::cout << "wrote phase_" << provider << ".csv (" << rows.size() << " rows)\n";
    return 0;
  }
  if (provider.rfind("surrogate:", 0) == 0) {
    const int iter = std::stoi(provider.substr(10));
    const DesignHistory history = load_history(cfg.output_dir);
    const MixturePosterior mix = mixture_at_iteration(history, iter);
    std::mt19937_64 rng(cfg.design.seed + 77);
    std::uniform_int_distribution<int> pick(0, mix.size() - 1);
    for (int r = 0; r < samples; ++r) {
      const GammaProvider g = surrogate_provider(mix, pick(rng), history.config.space);
      const auto rows = phase_table(grid, g, sys);
      write_phase_csv(out_dir + "/phase_surrogate_" + std::to_string(iter) + "_r" +
                          std::to_string(r) + ".csv",
                      rows);
    }
    std::cout << "wrote " << samples << " surrogate phase curve files\n";
    return 0;
  }
  throw ConfigError("unknown provider: " + provider +
                    " (expected wilson, ideal, or surrogate:<iter>)");
}

int cmd_column(const RunConfig& cfg, const std::string& curve_path,
               const std::string& out_dir) {
  const auto rows = read_phase_csv(curve_path);
  fs::create_directories(out_dir);
  try {
    const EquilibriumCurve curve = build_equilibrium(rows);
    const OperatingLines lines = operating_lines(cfg.column);
    const StageProfile profile = step_stages(cfg.column, curve, cfg.column.n_stages);

    json report;
    report["spec"] = {{"n_stages", cfg.column.n_stages},
                      {"reflux_ratio", cfg.column.reflux_ratio},
                      {"x_distillate", cfg.column.x_distillate},
                      {"x_bottoms", cfg.column.x_bottoms},
                      {"x_feed", cfg.column.x_feed},
                      {"feed_flow", cfg.column.feed_flow},
                      {"feed_stage", cfg.column.feed_stage},
                      {"q", cfg.column.q}};
    report["flows"] = {{"distillate", profile.flows.distillate},
                       {"bottoms", profile.flows.bottoms},
                       {"reflux", profile.flows.reflux},
                       {"vapor_top", profile.flows.vapor_top},
                       {"liquid_rect", profile.flows.liquid_rect},
                       {"liquid_strip", profile.flows.liquid_strip},
                       {"vapor_rect", profile.flows.vapor_rect},
                       {"vapor_strip", profile.flows.vapor_strip}};
    report["stages"] = json::array();
    for (std::size_t i = 0; i < profile.stages.size(); ++i)
      report["stages"].push_back(
          {{"stage", i + 1}, {"x", profile.stages[i].x}, {"y", profile.stages[i].y}});
    report["achieved_bottoms"] = profile.achieved_bottoms;
    report["n_stages_stepped"] = profile.stages.size();
    std::ofstream(out_dir + "/report.json") << report.dump(2) << "\n";

    CsvTable st;
    st.header = {"stage", "x", "y"};
    for (std::size_t i = 0; i < profile.stages.size(); ++i)
      st.rows.push_back({std::to_string(i + 1), format_double(profile.stages[i].x),
                         format_double(profile.stages[i].y)});
    write_csv(out_dir + "/stages.csv", st);

    CsvTable ol;
    ol.header = {"line", "slope", "intercept"};
    ol.rows.push_back({"enriching", format_double(lines.enriching.slope),
                       format_double(lines.enriching.intercept)});
    ol.rows.push_back({"stripping", format_double(lines.stripping.slope),
                       format_double(lines.stripping.intercept)});
    if (!lines.q_line_vertical)
      ol.rows.push_back({"q_line", format_double(lines.q_line.slope),
                         format_double(lines.q_line.intercept)});
    write_csv(out_dir + "/operating_lines.csv", ol);

    std::cout << profile.stages.size() << " stages stepped, bottoms "
              << profile.achieved_bottoms << "\n";
    return 0;
  } catch (const InputError& e) {
    throw NumericalError(std::string("infeasible column specification: ") + e.what());
  }
}

int cmd_diagnose(const std::string& history_dir) {
  const DesignHistory history = load_history(history_dir);
  if (history.records.empty()) throw InputError("history has no iterations to diagnose");
  const std::string out_dir = history_dir + "/diagnostics";
  fs::create_directories(out_dir);
  const int n_theta = static_cast<int>(history.config.priors.size());

  CsvTable summary;
  summary.header = {"iteration", "parameter", "map", "ci_lower", "ci_upper", "rhat"};
  for (const auto& rec : history.records) {
    if (rec.chains.chains.size() < 2)
      throw InputError("iteration " + std::to_string(rec.iteration) +
                       " has fewer than two chains; R-hat is undefined");
    const std::string suffix = "_" + std::to_string(rec.iteration) + ".csv";

    CsvTable trace, joint;
    trace.header = {"chain", "draw"};
    for (int k = 1; k <= n_theta; ++k) trace.header.push_back("theta" + std::to_string(k));
    joint.header = std::vector<std::string>(trace.header.begin() + 2, trace.header.end());
    for (std::size_t c = 0; c < rec.chains.chains.size(); ++c)
      for (std::size_t d = 0; d < rec.chains.chains[c].draws.size(); ++d) {
        std::vector<std::string> row{std::to_string(c + 1), std::to_string(d + 1)};
        std::vector<std::string> jrow;
        for (int k = 0; k < n_theta; ++k) {
          row.push_back(format_double(rec.chains.chains[c].draws[d][k]));
          jrow.push_back(row.back());
        }
        trace.rows.push_back(std::move(row));
        joint.rows.push_back(std::move(jrow));
      }
    write_csv(out_dir + "/trace" + suffix, trace);
    write_csv(out_dir + "/joint" + suffix, joint);

    for (int k = 0; k < n_theta; ++k) {
      std::vector<double> pooled;
      for (const auto& chain : rec.chains.chains)
        for (const auto& draw : chain.draws) pooled.push_back(draw[k]);
      std::sort(pooled.begin(), pooled.end());
      const std::size_t q = pooled.size();
      const double lo = pooled[std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(0.025 * q))) - 1];
      const double hi = pooled[std::min(
          q, static_cast<std::size_t>(std::ceil(0.975 * q))) - 1];

      // MAP via 256-bin histogram mode over the pooled sample range.
      constexpr int kBins = 256;
      const double span = pooled.back() - pooled.front();
      double map = pooled.front();
      if (span > 0.0) {
        std::vector<int> counts(kBins, 0);
        for (double v : pooled) {
          int b = static_cast<int>((v - pooled.front()) / span * kBins);
          counts[std::min(b, kBins - 1)]++;
        }
        const int best =
            static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        map = pooled.front() + span * (best + 0.5) / kBins;
      }
      const double rhat = gelman_rubin(rec.chains.coordinate(k));
      summary.rows.push_back({std::to_string(rec.iteration), "theta" + std::to_string(k + 1),
                              format_double(map), format_double(lo), format_double(hi),
                              format_double(rhat)});
      std::cout << "iter " << rec.iteration << " theta" << k + 1 << " R-hat " << rhat << "\n";
    }
  }
  write_csv(out_dir + "/summary.csv", summary);
  return 0;
}

int cmd_entropy_map(const RunConfig& cfg, int iter, int grid_n) {
  const DesignHistory history = load_history(cfg.output_dir);
  const MixturePosterior mix = mixture_at_iteration(history, iter);
  const DesignSpace& space = history.config.space;
  if (grid_n < 2) throw ConfigError("entropy-map grid must be at least 2");

  CsvTable t;
  t.header = {"z", "T", "H"};
  std::vector<Eigen::VectorXd> grid;
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      Eigen::Vector2d raw(space.lower[0] + (space.upper[0] - space.lower[0]) * i / (grid_n - 1),
                          space.lower[1] + (space.upper[1] - space.lower[1]) * j / (grid_n - 1));
      grid.push_back(space.to_model(raw));
      t.rows.push_back({format_double(raw[0]), format_double(raw[1]), ""});
    }
  const auto values = entropy_field(mix, grid, history.config.estimator);
  for (std::size_t i = 0; i < values.size(); ++i) t.rows[i][2] = format_double(values[i]);
  const std::string path =
      cfg.output_dir + "/entropy_map_" + std::to_string(iter) + ".csv";
  write_csv(path, t);
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential GP surrogate design for binary VLE and distillation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");

  auto* run = app.add_subcommand("run", "execute the full design loop");

  auto* phase = app.add_subcommand("phase", "emit phase equilibrium curves");
  std::string provider = "wilson";
  int samples = 1, points = 26;
  std::string phase_out = "phase";
  phase->add_option("--provider", provider, "wilson | ideal | surrogate:<iter>");
  phase->add_option("--samples", samples, "posterior realizations (surrogate only)");
  phase->add_option("--points", points, "composition grid size");
  phase->add_option("--out", phase_out, "output directory");

  auto* column = app.add_subcommand("column", "step a McCabe-Thiele column");
  std::string curve_path, column_out = "column";
  column->add_option("--curve", curve_path, "phase table CSV")->required();
  column->add_option("--out", column_out, "output directory");

  auto* diagnose = app.add_subcommand("diagnose", "MCMC diagnostics for a history");
  std::string history_dir;
  diagnose->add_option("dir", history_dir, "history directory");

  auto* emap = app.add_subcommand("entropy-map", "entropy field for one iteration");
  int iter = 1, grid_n = 50;
  emap->add_option("--iter", iter, "iteration index (1-based)");
  emap->add_option("--grid", grid_n, "grid resolution per axis");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = load_run_config(config_path);
    if (run->parsed()) return cmd_run(cfg);
    if (phase->parsed()) return cmd_phase(cfg, provider, samples, points, phase_out);
    if (column->parsed()) return cmd_column(cfg, curve_path, column_out);
    if (diagnose->parsed())
      return cmd_diagnose(history_dir.empty() ? cfg.output_dir : history_dir);
    if (emap->parsed()) return cmd_entropy_map(cfg, iter, grid_n);
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", "config"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << json{{"error", "input"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << json{{"error", "numerical"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << json{{"error", "domain"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
  return 0;
}
