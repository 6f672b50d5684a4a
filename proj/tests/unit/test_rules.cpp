#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mpf/hierarchy.hpp"
#include "mpf/rules.hpp"

using namespace mpf;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory line(int steps, double y, double speed, double heading = 0.0, double x0 = 0.0) {
  Trajectory t;
  for (int k = 0; k < steps; ++k) t.states.push_back({x0 + k * speed * 0.5, y, heading, speed, k + 1});
  return t;
}

Trajectory static_at(Vec2 p, int steps) {
  Trajectory t;
  for (int k = 0; k < steps; ++k) t.states.push_back({p.x, p.y, 0.0, 0.0, k + 1});
  return t;
}

}  // namespace

TEST_CASE("collision robustness") {
  const Trajectory ego = line(8, 0.0, 0.0);
  const std::vector<Trajectory> five{static_at({0, 5}, 8)};
  CHECK(rob_collision(ego, five, 2.0) == Approx(3.0));
  const std::vector<Trajectory> same{static_at({0, 0}, 8)};
  CHECK(rob_collision(ego, same, 2.0) == Approx(-2.0));
  CHECK(rob_collision(ego, {}, 2.0) == 1e6);
}

TEST_CASE("lane-follow robustness") {
  const Lane lane = testing::straight_lane("l", 100.0);
  CHECK(rob_lane_follow(line(8, 0.0, 5.0), lane, 1.75) == Approx(1.75));
  Trajectory drift = line(8, 0.0, 5.0);
  drift.states[3].y = -2.0;
  CHECK(rob_lane_follow(drift, lane, 1.75) == Approx(-0.25));
  CHECK(rob_lane_follow(line(8, 1.75, 5.0), lane, 1.75) == Approx(0.0));
}

TEST_CASE("orientation robustness") {
  const Lane lane = testing::straight_lane("l", 100.0);
  CHECK(rob_orientation(line(8, 0.0, 5.0), lane, kPi / 4) == Approx(kPi / 4));
  Trajectory bad = line(8, 0.0, 5.0);
  bad.states[2].heading = kPi / 2;
  CHECK(rob_orientation(bad, lane, kPi / 4) == Approx(-kPi / 4));

  // A westbound lane has tangent +pi; heading -pi is the same direction.
  const Lane west("w", {{100, 0}, {0, 0}}, 10.0);
  const Trajectory back = line(4, 0.0, 0.0, -kPi, 50.0);
  CHECK(rob_orientation(back, west, kPi / 4) == Approx(kPi / 4));
}

TEST_CASE("speed robustness") {
  auto with_max = [](double vmax) {
    Trajectory t = line(8, 0.0, 5.0);
    t.states[4].speed = vmax;
    return t;
  };
  CHECK(rob_speed(with_max(8.0), 10.0) == Approx(2.0));
  CHECK(rob_speed(with_max(10.0), 10.0) == Approx(0.0));
  CHECK(rob_speed(with_max(12.0), 10.0) == Approx(-2.0));
}

TEST_CASE("robustness vector order and normalization") {
  const Lane lane("l", {{0, 0}, {200, 0}}, 12.0);
  const RuleParams params;
  const Trajectory legal = line(8, 0.0, 8.0);
  const auto clean = robustness_vector(legal, {}, lane, params);
  REQUIRE(clean.size() == 4);
  for (double v : clean.values) CHECK(v > 0.0);
  CHECK(clean[1] == Approx(1.0));
  CHECK(clean[2] == Approx(1.0));
  CHECK(clean[3] == Approx(4.0 / 5.0));

  const auto fast = robustness_vector(line(8, 0.0, 14.0), {}, lane, params);
  CHECK(fast[0] > 0.0);
  CHECK(fast[1] > 0.0);
  CHECK(fast[2] > 0.0);
  CHECK(fast[3] < 0.0);

  // Oncoming agent driving through the ego path.
  Trajectory oncoming;
  for (int k = 0; k < 8; ++k) oncoming.states.push_back({32.0 - k * 4.0, 0.0, kPi, 8.0, k + 1});
  const std::vector<Trajectory> others{oncoming};
  CHECK(robustness_vector(legal, others, lane, params)[0] < 0.0);
}

TEST_CASE("robustness sign matches a boolean evaluator") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> jitter(0.0, 1.2);
  std::uniform_real_distribution<double> speed(0.0, 16.0), angle(-1.5, 1.5);
  const Lane lane("l", {{-50, 0}, {250, 0}}, 12.0);
  const RuleParams p;
  for (int k = 0; k < 1000; ++k) {
    Trajectory ego, other;
    for (int s = 0; s < 8; ++s) {
      ego.states.push_back({s * 4.0 + jitter(rng), jitter(rng), angle(rng), speed(rng), s + 1});
      other.states.push_back({s * 4.0 + 3.0 * jitter(rng), 3.0 * jitter(rng), 0.0, 5.0, s + 1});
    }
    bool clear = true, in_lane = true, aligned = true, legal = true;
    for (int s = 0; s < 8; ++s) {
      const auto& e = ego.states[s];
      clear &= distance(e.position(), other.states[s].position()) >= p.d_safe;
      in_lane &= std::abs(e.y) <= p.lat_max;
      aligned &= std::abs(e.heading) <= p.theta_max;
      legal &= e.speed <= 12.0;
    }
    const std::vector<Trajectory> others{other};
    const auto rho = robustness_vector(ego, others, lane, p);
    CHECK((rho[0] >= 0.0) == clear);
    CHECK((rho[1] >= 0.0) == in_lane);
    CHECK((rho[2] >= 0.0) == aligned);
    CHECK((rho[3] >= 0.0) == legal);
  }
}

TEST_CASE("robustness monotonicity and heading periodicity") {
  const Lane lane = testing::straight_lane("l", 100.0);
  const Trajectory ego = line(8, 0.0, 6.0);
  double last = -1e9;
  for (double gap = 0.5; gap < 20.0; gap += 1.5) {
    const std::vector<Trajectory> others{static_at({10.0, gap}, 8)};
    const double r = rob_collision(ego, others, 2.0);
    CHECK(r >= last);
    last = r;
  }
  Trajectory slower = ego;
  for (auto& s : slower.states) s.speed *= 0.7;
  CHECK(rob_speed(slower, 10.0) >= rob_speed(ego, 10.0));

  Trajectory spun = ego;
  spun.states[1].heading += 0.3;
  Trajectory spun_wrapped = spun;
  spun_wrapped.states[1].heading += 2 * kPi;
  CHECK(rob_orientation(spun, lane, kPi / 4) == Approx(rob_orientation(spun_wrapped, lane, kPi / 4)));
}

TEST_CASE("rank reproduces the two-rule table") {
  CHECK(rank(RobustnessVector{{0.1, 0.1}}) == 1);
  CHECK(rank(RobustnessVector{{0.1, -0.1}}) == 2);
  CHECK(rank(RobustnessVector{{-0.1, 0.1}}) == 3);
  CHECK(rank(RobustnessVector{{-0.1, -0.1}}) == 4);
  CHECK(rank(RobustnessVector{{0.0}}) == 1);
}

TEST_CASE("reward direct evaluations") {
  CHECK(reward(RobustnessVector{{1.0, -1.0}}, {2, 4.0, 1.0}) == Approx(16.0));
  CHECK(reward(RobustnessVector{{0.5, 0.2, -0.1, 0.3}}, {4, 4.0, 1.0}) == Approx(324.225));
  CHECK(reward(RobustnessVector{{0.0}}, {1, 4.0, 1.0}) == Approx(4.0));
  // Clamping keeps large margins from leaking across ranks.
  CHECK(reward(RobustnessVector{{50.0, 1.0}}, {2, 4.0, 1.0}) == Approx(reward(RobustnessVector{{1.0, 1.0}}, {2, 4.0, 1.0})));
}

TEST_CASE("reward increases in every component within a sign pattern") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  const HierarchyConfig cfg;
  for (int k = 0; k < 500; ++k) {
    RobustnessVector rho;
    for (int i = 0; i < 4; ++i) rho.values.push_back(u(rng) * (k >> i & 1 ? -1.0 : 1.0));
    for (int i = 0; i < 4; ++i) {
      RobustnessVector up = rho;
      up.values[i] += rho.values[i] < 0.0 ? 0.04 : 0.05;
      if ((up.values[i] < 0.0) != (rho.values[i] < 0.0)) continue;
      CHECK(reward(up, cfg) > reward(rho, cfg));
    }
  }
}

TEST_CASE("boltzmann examples") {
  const std::vector<double> tied{1.0, 1.0};
  auto p = boltzmann(tied, 0.3);
  CHECK(p[0] == Approx(0.5));
  const std::vector<double> gap{2.0, 0.0};
  p = boltzmann(gap, 1.0);
  CHECK(p[0] == Approx(0.88080).epsilon(1e-5));
  CHECK(p[1] == Approx(0.11920).epsilon(1e-4));
  const std::vector<double> sharp{10.0, 0.0};
  CHECK(boltzmann(sharp, 0.01)[0] >= 1.0 - 1e-9);
  const std::vector<double> huge{340.0, 330.0, -5.0};
  p = boltzmann(huge, 0.5);
  CHECK(std::isfinite(p[0]));
  CHECK(p[0] + p[1] + p[2] == Approx(1.0));
}

TEST_CASE("boltzmann is shift invariant") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> r(10), s(10);
    const double c = u(rng);
    for (int i = 0; i < 10; ++i) {
      r[i] = u(rng);
      s[i] = r[i] + c;
    }
    const auto a = boltzmann(r, 2.0), b = boltzmann(s, 2.0);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("hierarchy config validation") {
  CHECK_THROWS(validate(HierarchyConfig{4, 2.0, 1.0}));
  CHECK_THROWS(validate(HierarchyConfig{4, 4.0, 0.0}));
  CHECK_THROWS(validate(HierarchyConfig{0, 4.0, 1.0}));
  CHECK_NOTHROW(validate(HierarchyConfig{}));
}
