#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "mpf/rh_predictor.hpp"
#include "mpf/tree.hpp"

using namespace mpf;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t branch_index(const TreeConfig& cfg, double offset, double fraction) {
  std::size_t j = 0, k = 0;
  while (cfg.lateral_offsets[j] != offset) ++j;
  while (cfg.terminal_speed_fractions[k] != fraction) ++k;
  return j * cfg.terminal_speed_fractions.size() + k;
}

}  // namespace

TEST_CASE("lane selection") {
  LaneMap map;
  map.lanes.push_back(testing::straight_lane("a", 100.0, 0.0));
  map.lanes.push_back(testing::straight_lane("b", 100.0, 10.0));
  CHECK(select_lane({20, 0, 0, 5, 0}, map, 2.0).id() == "a");

  // Opposite-direction lane 2 m to the other side: orientation decides.
  LaneMap opposing;
  opposing.lanes.push_back(Lane("b_west", {{100, 4}, {0, 4}}, 10.0));
  opposing.lanes.push_back(Lane("a_east", {{0, 0}, {100, 0}}, 10.0));
  for (double w : {0.01, 1.0, 5.0}) CHECK(select_lane({50, 2, 0, 5, 0}, opposing, w).id() == "a_east");

  LaneMap single;
  single.lanes.push_back(testing::straight_lane("only"));
  CHECK(select_lane({5, 30, 1.0, 5, 0}, single, 2.0).id() == "only");

  // Exact tie: identical costs on both sides, smallest id wins.
  LaneMap twins;
  twins.lanes.push_back(testing::straight_lane("z", 100.0, 2.0));
  twins.lanes.push_back(testing::straight_lane("m", 100.0, -2.0));
  CHECK(select_lane({50, 0, 0, 5, 0}, twins, 2.0).id() == "m");
}

TEST_CASE("straight constant-speed branch stays on the centerline") {
  const Lane lane = testing::straight_lane("l", 300.0, 0.0, 10.0);
  TreeConfig cfg;
  const AgentState s{20, 0, 0, 10.0, 4};
  const auto tree = build_tree(s, lane, cfg);
  const auto& b = tree[branch_index(cfg, 0.0, 1.0)];
  REQUIRE(b.states.size() == 8);
  for (std::size_t k = 0; k < b.states.size(); ++k) {
    CHECK(std::abs(b.states[k].y) < 1e-6);
    CHECK(b.states[k].x == Approx(20.0 + 5.0 * (k + 1)));
    CHECK(b.states[k].speed == Approx(10.0));
    CHECK(b.states[k].t == 5 + static_cast<int>(k));
  }
}

TEST_CASE("zero speed with zero terminal speed is stationary") {
  const Lane lane = testing::straight_lane("l");
  TreeConfig cfg;
  const AgentState s{30, 0.4, 0.1, 0.0, 0};
  const auto tree = build_tree(s, lane, cfg);
  for (double offset : cfg.lateral_offsets) {
    const auto& b = tree[branch_index(cfg, offset, 0.0)];
    for (const auto& st : b.states) {
      CHECK(st.x == Approx(30.0));
      CHECK(st.y == Approx(0.4));
      CHECK(st.speed == Approx(0.0));
    }
  }
}

TEST_CASE("branch count and root continuity") {
  const Lane lane("curve", [] {
    std::vector<Vec2> pts;
    for (int i = 0; i <= 90; ++i) pts.push_back({40.0 * std::sin(i * kPi / 180.0), 40.0 - 40.0 * std::cos(i * kPi / 180.0)});
    return pts;
  }(), 12.0);
  TreeConfig cfg;
  cfg.lateral_offsets = {-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5};
  cfg.terminal_speed_fractions = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.1, 1.2};
  const AgentState s{5.0, 0.5, 0.15, 9.0, 3};
  const auto tree = build_tree(s, lane, cfg);
  CHECK(tree.size() == 64);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const double off = cfg.lateral_offsets[i / 8];
    const double frac = cfg.terminal_speed_fractions[i % 8];
    const HermiteSpline sp = branch_spline(s, lane, off, frac * lane.speed_limit(), cfg.horizon * cfg.dt);
    CHECK(distance(sp.position(0.0), s.position()) < 1e-9);
    const Vec2 d = sp.derivative(0.0);
    CHECK(std::abs(wrap_angle(std::atan2(d.y, d.x) - s.heading)) < 1e-6);
    Vec2 prev = s.position();
    for (const auto& st : tree[i].states) {
      CHECK(std::isfinite(st.x));
      CHECK(std::isfinite(st.y));
      CHECK(distance(prev, st.position()) <= 1.5 * lane.speed_limit() * cfg.dt + 1e-9);
      prev = st.position();
    }
  }
}

TEST_CASE("branch terminal pose sits at the requested offset along the lane") {
  const Lane lane = testing::straight_lane("l", 300.0);
  TreeConfig cfg;
  const AgentState s{10, 0, 0, 6.0, 0};
  const auto tree = build_tree(s, lane, cfg);
  const auto& b = tree[branch_index(cfg, 2.0, 0.5)];
  const double travel = 0.5 * (6.0 + 6.0) * 4.0;
  CHECK(b.back().x == Approx(10.0 + travel));
  CHECK(b.back().y == Approx(2.0));
  CHECK(b.back().heading == Approx(0.0).epsilon(1e-9));
}

TEST_CASE("travel beyond the lane end follows the extended last tangent") {
  const Lane lane = testing::straight_lane("short", 20.0);
  TreeConfig cfg;
  const auto tree = build_tree({15, 0, 0, 10.0, 0}, lane, cfg);
  const auto& b = tree[branch_index(cfg, 0.0, 1.0)];
  CHECK(b.back().x == Approx(15.0 + 0.5 * (10.0 + 12.0) * 4.0));
  CHECK(std::abs(b.back().y) < 1e-9);
}

TEST_CASE("constant-velocity extrapolation") {
  const AgentState last{0, 0, kPi / 2, 4.0, 10};
  const Trajectory cv = extrapolate_constant_velocity(last, 10, 3, 0.5);
  REQUIRE(cv.states.size() == 3);
  CHECK(cv.states[2].y == Approx(6.0));
  CHECK(std::abs(cv.states[2].x) < 1e-12);
  CHECK(cv.states[0].t == 11);
}

TEST_CASE("reward ordering on a straight clear lane") {
  // Under always-semantics the speed margin is min over the branch, so a
  // slower terminal speed earns a larger tie-breaking term than driving at
  // the limit. What holds: the centered branch is best at each speed, and
  // the centered limit-speed branch is in the top rank.
  auto map = testing::single_lane_map(12.0);
  const PredictionScene scene = testing::cruising_scene(map, 8.0);
  const RhPredictor rh;
  const RhEvaluation eval = rh.evaluate(scene, 8);
  const TreeConfig& cfg = rh.config().tree;
  const std::size_t limit_branch = branch_index(cfg, 0.0, 1.0);
  CHECK(rank(eval.robustness[limit_branch]) == 1);
  for (double frac : cfg.terminal_speed_fractions) {
    const double centered = eval.scores.rewards[branch_index(cfg, 0.0, frac)];
    for (double off : cfg.lateral_offsets)
      if (off != 0.0) CHECK(centered > eval.scores.rewards[branch_index(cfg, off, frac)]);
  }
  const auto best = std::max_element(eval.scores.rewards.begin(), eval.scores.rewards.end());
  CHECK(static_cast<std::size_t>(best - eval.scores.rewards.begin()) / cfg.terminal_speed_fractions.size() ==
        branch_index(cfg, 0.0, 0.0) / cfg.terminal_speed_fractions.size());
}
