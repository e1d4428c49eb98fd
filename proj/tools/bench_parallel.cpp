#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "bits/design.hpp"
#include "bits/gp.hpp"
#include "bits/kernels.hpp"
#include "bits/mixture.hpp"

using namespace bits;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds(t0, Clock::now()));
  }
  return best;
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);

  {
    const int n = 1500;
    Eigen::MatrixXd X(2, n);
    for (int i = 0; i < n; ++i) X.col(i) = Eigen::Vector2d(normal(rng), normal(rng));
    KernelSpec spec;
    spec.length_scales = {0.3, 0.8};

    CovMatrix serial, parallel;
    const double ts = time_best_of(3, [&] { serial = build_cov_serial(X, spec, 1e-10); });
    const double tp = time_best_of(3, [&] { parallel = build_cov(X, spec, 1e-10); });
    const double diff = (serial.entries - parallel.entries).cwiseAbs().maxCoeff();
    std::printf("build_cov        n=%d  serial %.3fs  parallel %.3fs  speedup %.2fx  maxdiff %.1e\n",
                n, ts, tp, ts / tp, diff);
  }

  {
    const int n_train = 40, s = 15, grid_side = 120;
    Dataset d;
    d.X.resize(2, n_train);
    d.y.resize(n_train);
    for (int i = 0; i < n_train; ++i) {
      d.X.col(i) = Eigen::Vector2d(normal(rng), normal(rng));
      d.y[i] = std::sin(d.X(0, i)) + 0.1 * normal(rng);
    }
    std::vector<GPState> components;
    for (int k = 0; k < s; ++k) {
      KernelSpec spec;
      spec.tau = 1.0 / (0.5 + 0.1 * k);
      spec.length_scales = {0.2 + 0.05 * k, 0.4 + 0.05 * k};
      components.emplace_back(d, spec, 0.01);
    }
    const MixturePosterior mix(std::move(components));

    std::vector<Eigen::VectorXd> grid;
    for (int i = 0; i < grid_side; ++i)
      for (int j = 0; j < grid_side; ++j)
        grid.push_back(Eigen::Vector2d(-2.0 + 4.0 * i / (grid_side - 1),
                                       -2.0 + 4.0 * j / (grid_side - 1)));

    std::vector<double> vs, vp;
    const double ts = time_best_of(3, [&] { vs = entropy_field_serial(mix, grid); });
    const double tp = time_best_of(3, [&] { vp = entropy_field(mix, grid); });
    double diff = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) diff = std::max(diff, std::abs(vs[i] - vp[i]));
    std::printf("entropy_field    %dx%d grid  serial %.3fs  parallel %.3fs  speedup %.2fx  maxdiff %.1e\n",
                grid_side, grid_side, ts, tp, ts / tp, diff);
  }

  return 0;
}
