#pragma once

#include <vector>

#include "bits/vle.hpp"

namespace bits {

struct ColumnSpec {
  int n_stages = 3;
  double reflux_ratio = 1.0;
  double x_distillate = 0.42;
  double x_bottoms = 0.01;
  double x_feed = 0.10;
  double feed_flow = 100.0;  // mol/s
  int feed_stage = 2;        // 1 = top
  double q = 1.0;            // feed quality; 1 = saturated liquid

  void validate() const;
};

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double at(double x) const { return slope * x + intercept; }
};

struct OperatingLines {
  Line enriching;
  Line stripping;
  bool q_line_vertical = true;
  Line q_line;               // meaningful when not vertical
  double intersection_x = 0.0;
  double intersection_y = 0.0;
};

OperatingLines operating_lines(const ColumnSpec& spec);

// Monotonicity-preserving piecewise-cubic interpolant (Fritsch-Carlson)
// through tabulated (x, y) equilibrium data. y data need not be monotone;
// the inverse searches segments by bisection.
class EquilibriumCurve {
 public:
  EquilibriumCurve(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

  // Largest root of phi(x) = y with x strictly below upper_bound (the
  // graphical horizontal step moving left). Returns false if no root exists.
  bool invert_below(double y, double upper_bound, double* root) const;

 private:
  std::vector<double> x_, y_, slope_;
};

EquilibriumCurve build_equilibrium(const std::vector<PhaseRow>& rows);

struct Stage {
  double x = 0.0;  // liquid leaving the stage
  double y = 0.0;  // vapor passing the stage
};

struct FlowProfile {
  double distillate = 0.0;     // D
  double bottoms = 0.0;        // W
  double reflux = 0.0;         // L0
  double vapor_top = 0.0;      // V1
  double liquid_rect = 0.0;    // L above the feed
  double liquid_strip = 0.0;   // L below the feed
  double vapor_rect = 0.0;     // V above the feed
  double vapor_strip = 0.0;    // V below the feed (= V_{n+1})
};

struct StageProfile {
  std::vector<Stage> stages;
  double achieved_bottoms = 0.0;
  FlowProfile flows;
};

FlowProfile flow_profiles(const ColumnSpec& spec);

// Steps off stages between the operating lines and the equilibrium curve
// starting from the distillate composition; switches from the enriching to
// the stripping line after the feed stage; stops at x <= x_bottoms or the
// stage cap.
StageProfile step_stages(const ColumnSpec& spec, const EquilibriumCurve& curve,
                         int stage_cap = 100);

}  // namespace bits
