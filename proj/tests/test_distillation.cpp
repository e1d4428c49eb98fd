#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bits/distillation.hpp"
#include "bits/errors.hpp"

using namespace bits;

namespace {

// constant-volatility equilibrium y = a x / (1 + (a - 1) x)
EquilibriumCurve volatility_curve(double alpha, int n = 101) {
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i) / (n - 1);
    y[i] = alpha * x[i] / (1.0 + (alpha - 1.0) * x[i]);
  }
  return EquilibriumCurve(std::move(x), std::move(y));
}

}  // namespace

TEST_CASE("operating lines for total reflux ratio one") {
  ColumnSpec spec;
  const OperatingLines lines = operating_lines(spec);
  CHECK(lines.enriching.slope == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lines.enriching.intercept == doctest::Approx(0.21).epsilon(1e-14));
  CHECK(lines.enriching.at(spec.x_distillate) == doctest::Approx(0.42).epsilon(1e-14));
  CHECK(lines.q_line_vertical);
  CHECK(lines.intersection_x == doctest::Approx(0.10).epsilon(1e-14));
  CHECK(lines.intersection_y == doctest::Approx(0.26).epsilon(1e-14));
  // stripping line passes through (x_W, x_W) and the intersection
  CHECK(lines.stripping.at(spec.x_bottoms) == doctest::Approx(spec.x_bottoms).epsilon(1e-12));
  CHECK(lines.stripping.at(lines.intersection_x) ==
        doctest::Approx(lines.intersection_y).epsilon(1e-12));
  CHECK(lines.stripping.slope == doctest::Approx(0.25 / 0.09).epsilon(1e-12));
}

TEST_CASE("operating lines approach the diagonal at high reflux") {
  ColumnSpec spec;
  spec.reflux_ratio = 1e6;
  const OperatingLines lines = operating_lines(spec);
  CHECK(std::abs(lines.enriching.slope - 1.0) < 2e-6);
  CHECK(std::abs(lines.enriching.intercept) < 1e-6);
  CHECK(std::abs(lines.stripping.slope - 1.0) < 1e-4);
}

TEST_CASE("non-vertical q line") {
  ColumnSpec spec;
  spec.q = 1.5;
  const OperatingLines lines = operating_lines(spec);
  CHECK_FALSE(lines.q_line_vertical);
  CHECK(lines.q_line.slope == doctest::Approx(spec.q / (spec.q - 1.0)).epsilon(1e-12));
  // q line passes through (x_F, x_F)
  CHECK(lines.q_line.at(spec.x_feed) == doctest::Approx(spec.x_feed).epsilon(1e-12));
  // intersection sits on both the enriching and the q line
  CHECK(lines.enriching.at(lines.intersection_x) ==
        doctest::Approx(lines.intersection_y).epsilon(1e-12));
  CHECK(lines.q_line.at(lines.intersection_x) ==
        doctest::Approx(lines.intersection_y).epsilon(1e-12));
}

TEST_CASE("column spec validation") {
  ColumnSpec bad;
  bad.x_distillate = 0.05;  // below the feed and bottoms ordering
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = ColumnSpec{};
  bad.reflux_ratio = -1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = ColumnSpec{};
  bad.x_bottoms = 0.42;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("equilibrium interpolation hits the knots and stays monotone") {
  const EquilibriumCurve curve = volatility_curve(2.5, 21);
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    CHECK(curve(x) == doctest::Approx(2.5 * x / (1.0 + 1.5 * x)).epsilon(1e-12));
  }
  double prev = curve(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double y = curve(i / 400.0);
    CHECK(y >= prev);
    prev = y;
  }
  // dense knots make the interpolant accurate between them too
  const EquilibriumCurve dense = volatility_curve(2.5, 201);
  for (double x : {0.013, 0.271, 0.509, 0.747, 0.985})
    CHECK(std::abs(dense(x) - 2.5 * x / (1.0 + 1.5 * x)) < 1e-6);
}

TEST_CASE("inverse returns the largest root strictly below the bound") {
  const EquilibriumCurve curve = volatility_curve(2.5);
  for (double y : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double root = -1.0;
    REQUIRE(curve.invert_below(y, 1.0, &root));
    CHECK(curve(root) == doctest::Approx(y).epsilon(1e-8));
    // analytic inverse of the constant-volatility curve
    CHECK(root == doctest::Approx(y / (2.5 - 1.5 * y)).epsilon(1e-6));
  }
  double root = -1.0;
  CHECK_FALSE(curve.invert_below(0.5, 0.1, &root));  // no root below the bound
  CHECK_FALSE(curve.invert_below(2.0, 1.0, &root));  // y outside the range
}

TEST_CASE("build from phase rows") {
  std::vector<PhaseRow> rows;
  for (int i = 0; i <= 10; ++i) {
    PhaseRow r;
    r.x = i / 10.0;
    r.t = 370.0 - r.x;
    r.y = 2.0 * r.x / (1.0 + r.x);
    rows.push_back(r);
  }
  const EquilibriumCurve curve = build_equilibrium(rows);
  CHECK(curve.x_min() == doctest::Approx(0.0));
  CHECK(curve.x_max() == doctest::Approx(1.0));
  CHECK(curve(0.5) == doctest::Approx(2.0 * 0.5 / 1.5).epsilon(1e-12));
}

TEST_CASE("mass balance flow profiles") {
  ColumnSpec spec;
  const FlowProfile f = flow_profiles(spec);
  CHECK(f.distillate == doctest::Approx(100.0 * 0.09 / 0.41).epsilon(1e-12));
  CHECK(f.bottoms == doctest::Approx(100.0 - 100.0 * 0.09 / 0.41).epsilon(1e-12));
  CHECK(f.distillate + f.bottoms == doctest::Approx(spec.feed_flow).epsilon(1e-12));
  // component balance
  CHECK(f.distillate * spec.x_distillate + f.bottoms * spec.x_bottoms ==
        doctest::Approx(spec.feed_flow * spec.x_feed).epsilon(1e-10));
  CHECK(f.reflux == doctest::Approx(spec.reflux_ratio * f.distillate).epsilon(1e-12));
  CHECK(f.vapor_top == doctest::Approx((spec.reflux_ratio + 1.0) * f.distillate).epsilon(1e-12));
  // saturated liquid feed: liquid jumps by F, vapor unchanged
  CHECK(f.liquid_strip == doctest::Approx(f.liquid_rect + spec.feed_flow).epsilon(1e-10));
  CHECK(f.vapor_strip == doctest::Approx(f.vapor_rect).epsilon(1e-10));
  CHECK(f.liquid_rect == doctest::Approx(f.reflux).epsilon(1e-12));
}

TEST_CASE("stage stepping invariants on a constant-volatility curve") {
  const EquilibriumCurve curve = volatility_curve(6.0, 201);
  ColumnSpec spec;
  const OperatingLines lines = operating_lines(spec);
  const StageProfile prof = step_stages(spec, curve);
  REQUIRE(prof.stages.size() >= 2);
  // first vapor is the distillate composition
  CHECK(prof.stages[0].y == doctest::Approx(spec.x_distillate).epsilon(1e-12));
  double prev_x = 2.0;
  for (std::size_t i = 0; i < prof.stages.size(); ++i) {
    const Stage& s = prof.stages[i];
    // every stage sits on the equilibrium curve
    CHECK(curve(s.x) == doctest::Approx(s.y).epsilon(1e-8));
    CHECK(s.x < prev_x);
    prev_x = s.x;
  }
  // vapor of each later stage comes from an operating line at the previous x
  for (std::size_t i = 1; i < prof.stages.size(); ++i) {
    const double x_above = prof.stages[i - 1].x;
    const double from_enriching = lines.enriching.at(x_above);
    const double from_stripping = lines.stripping.at(x_above);
    const bool on_a_line =
        std::abs(prof.stages[i].y - from_enriching) < 1e-10 ||
        std::abs(prof.stages[i].y - from_stripping) < 1e-10;
    CHECK(on_a_line);
  }
  CHECK(prof.achieved_bottoms == doctest::Approx(prof.stages.back().x).epsilon(1e-12));
  CHECK(prof.achieved_bottoms <= spec.x_bottoms + 1e-12);
}

TEST_CASE("stage cap truncates the staircase") {
  const EquilibriumCurve curve = volatility_curve(6.0, 201);
  ColumnSpec spec;
  const StageProfile full = step_stages(spec, curve);
  const StageProfile capped = step_stages(spec, curve, 2);
  CHECK(capped.stages.size() == 2);
  CHECK(capped.stages[0].x == doctest::Approx(full.stages[0].x).epsilon(1e-14));
  CHECK(capped.stages[1].x == doctest::Approx(full.stages[1].x).epsilon(1e-14));
}

TEST_CASE("switch to the stripping line happens after the feed stage") {
  const EquilibriumCurve curve = volatility_curve(6.0, 201);
  ColumnSpec spec;
  const OperatingLines lines = operating_lines(spec);
  const StageProfile prof = step_stages(spec, curve);
  const int feed = spec.feed_stage;
  REQUIRE(static_cast<int>(prof.stages.size()) > feed);
  // stages down to the feed stage take vapor from the enriching line
  for (int i = 1; i < feed && i < static_cast<int>(prof.stages.size()); ++i)
    CHECK(prof.stages[i].y ==
          doctest::Approx(lines.enriching.at(prof.stages[i - 1].x)).epsilon(1e-10));
  bool used_stripping = false;
  for (std::size_t i = 1; i < prof.stages.size(); ++i)
    if (std::abs(prof.stages[i].y - lines.stripping.at(prof.stages[i - 1].x)) < 1e-10)
      used_stripping = true;
  CHECK(used_stripping);
}
