#include "bits/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bits/errors.hpp"

namespace bits {

void ColumnSpec::validate() const {
  if (!(0.0 <= x_bottoms && x_bottoms < x_feed && x_feed < x_distillate && x_distillate <= 1.0))
    throw InputError("column spec needs 0 <= x_W < x_F < x_D <= 1");
  if (n_stages < 1) throw InputError("column needs at least one stage");
  if (feed_stage < 1 || feed_stage > n_stages)
    throw InputError("feed stage must lie within 1..n_stages");
  if (reflux_ratio <= 0.0) throw InputError("reflux ratio must be positive");
  if (feed_flow <= 0.0) throw InputError("feed flow must be positive");
}

OperatingLines operating_lines(const ColumnSpec& spec) {
  spec.validate();
  OperatingLines lines;
  const double r = spec.reflux_ratio;
  lines.enriching = {r / (r + 1.0), spec.x_distillate / (r + 1.0)};

  if (spec.q == 1.0) {
    lines.q_line_vertical = true;
    lines.intersection_x = spec.x_feed;
    lines.intersection_y = lines.enriching.at(spec.x_feed);
  } else {
    lines.q_line_vertical = false;
    const double qs = spec.q / (spec.q - 1.0);
    lines.q_line = {qs, spec.x_feed - qs * spec.x_feed};
    const double denom = lines.enriching.slope - qs;
    if (std::abs(denom) < 1e-14)
      throw InputError("q-line is parallel to the enriching line");
    lines.intersection_x = (lines.q_line.intercept - lines.enriching.intercept) / denom;
    lines.intersection_y = lines.enriching.at(lines.intersection_x);
  }
  if (lines.intersection_x < 0.0 || lines.intersection_x > 1.0 ||
      lines.intersection_y < 0.0 || lines.intersection_y > 1.0)
    throw InputError("operating lines do not intersect inside the unit square");

  const double sx = lines.intersection_x - spec.x_bottoms;
  if (std::abs(sx) < 1e-14)
    throw InputError("stripping line undefined: intersection at the bottoms composition");
  const double slope = (lines.intersection_y - spec.x_bottoms) / sx;
  lines.stripping = {slope, spec.x_bottoms - slope * spec.x_bottoms};
  return lines;
}

EquilibriumCurve::EquilibriumCurve(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw InputError("equilibrium curve needs at least two (x, y) rows");
  for (std::size_t i = 1; i < n; ++i) {
    if (x_[i] == x_[i - 1]) throw InputError("duplicate x in equilibrium data");
    if (x_[i] < x_[i - 1]) throw InputError("equilibrium x values must be increasing");
  }

  // Fritsch-Carlson tangents: preserves local monotonicity, no overshoot.
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  slope_.resize(n);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
      const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
      slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double a = slope_[i] / delta[i];
    const double b = slope_[i + 1] / delta[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      slope_[i] = t * a * delta[i];
      slope_[i + 1] = t * b * delta[i];
    }
  }
}

double EquilibriumCurve::operator()(double x) const {
  if (x < x_.front() || x > x_.back())
    throw InputError("equilibrium curve evaluated outside its tabulated range");
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = std::min<std::size_t>(
      x_.size() - 2, it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

bool EquilibriumCurve::invert_below(double y, double upper_bound, double* root) const {
  upper_bound = std::min(upper_bound, x_.back());
  // Scan segments right to left; the first bracketed crossing is the largest
  // root below the bound.
  for (std::size_t i = x_.size() - 1; i-- > 0;) {
    double lo = x_[i];
    double hi = std::min(x_[i + 1], upper_bound);
    if (lo >= hi) continue;
    double flo = (*this)(lo) - y;
    double fhi = (*this)(hi)-y;
    // Hermite segments are cubic; sample interior points so roots inside a
    // segment whose endpoints sit on the same side are still found.
    constexpr int kSub = 8;
    double best = 0.0;
    bool found = false;
    double a = lo, fa = flo;
    for (int s = 1; s <= kSub; ++s) {
      const double b = lo + (hi - lo) * s / kSub;
      const double fb = (s == kSub) ? fhi : (*this)(b)-y;
      if (fa == 0.0) { best = a; found = true; }
      if (fa * fb <= 0.0 && !(fa == 0.0 && fb == 0.0)) {
        double blo = a, bhi = b, gl = fa;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (blo + bhi);
          const double fm = (*this)(mid)-y;
          if (gl * fm <= 0.0) bhi = mid; else { blo = mid; gl = fm; }
        }
        best = 0.5 * (blo + bhi);  // rightmost sub-bracket wins
        found = true;
      }
      a = b;
      fa = fb;
    }
    if (found) {
      *root = best;
      return true;
    }
  }
  return false;
}

EquilibriumCurve build_equilibrium(const std::vector<PhaseRow>& rows) {
  std::vector<double> x, y;
  x.reserve(rows.size());
  y.reserve(rows.size());
  for (const auto& r : rows) {
    x.push_back(r.x);
    y.push_back(r.y);
  }
  return EquilibriumCurve(std::move(x), std::move(y));
}

FlowProfile flow_profiles(const ColumnSpec& spec) {
  spec.validate();
  FlowProfile f;
  f.distillate = spec.feed_flow * (spec.x_feed - spec.x_bottoms) /
                 (spec.x_distillate - spec.x_bottoms);
  f.bottoms = spec.feed_flow - f.distillate;
  f.reflux = spec.reflux_ratio * f.distillate;
  f.vapor_top = f.reflux + f.distillate;
  f.liquid_rect = f.reflux;
  f.liquid_strip = f.liquid_rect + spec.q * spec.feed_flow;
  f.vapor_rect = f.vapor_top;
  f.vapor_strip = f.vapor_rect - (1.0 - spec.q) * spec.feed_flow;
  return f;
}

StageProfile step_stages(const ColumnSpec& spec, const EquilibriumCurve& curve, int stage_cap) {
  spec.validate();
  const OperatingLines lines = operating_lines(spec);

  StageProfile profile;
  profile.flows = flow_profiles(spec);

  double y = spec.x_distillate;  // y1 = x_D (total condenser)
  double x_prev = spec.x_distillate;
  for (int i = 1; i <= stage_cap; ++i) {
    double x;
    if (!curve.invert_below(y, x_prev, &x)) {
      // Pinched against the curve or y outside its range.
      if (y <= curve(curve.x_min()) || y <= spec.x_bottoms) {
        x = curve.x_min();
      } else {
        throw InputError("stage " + std::to_string(i) + ": vapor composition " +
                         std::to_string(y) + " unreachable on the equilibrium curve");
      }
    }
    profile.stages.push_back({x, y});
    profile.achieved_bottoms = x;
    if (x <= spec.x_bottoms) break;
    y = (i < spec.feed_stage ? lines.enriching : lines.stripping).at(x);
    x_prev = x;
  }
  return profile;
}

}  // namespace bits
