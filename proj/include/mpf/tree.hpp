#pragma once

#include <vector>

#include "mpf/types.hpp"

namespace mpf {

/// Fan of K = |lateral_offsets| x |terminal_speed_fractions| branches.
struct TreeConfig {
  std::vector<double> lateral_offsets{-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0};  // m from centerline
  std::vector<double> terminal_speed_fractions{0.0, 0.25, 0.5, 0.75, 1.0};    // of the lane speed limit
  int horizon{8};     // T, steps
  double dt{0.5};     // s
  double w_theta{2.0};  // m/rad, orientation weight in lane selection

  std::size_t branch_count() const { return lateral_offsets.size() * terminal_speed_fractions.size(); }
};

void validate(const TreeConfig& cfg);

/// Cubic Hermite segment on u in [0, 1].
struct HermiteSpline {
  Vec2 p0, p1, m0, m1;

  Vec2 position(double u) const;
  Vec2 derivative(double u) const;
};

/// Lane minimizing |lateral offset| + w_theta * |heading error| at the
/// agent's projection. Exact ties go to the smallest lane id.
const Lane& select_lane(const AgentState& state, const LaneMap& map, double w_theta);

/// Spline from the current pose to terminal pose (lateral offset j, speed
/// fraction k). Terminal arc length is s0 plus the integral of the linear
/// speed profile over the horizon.
HermiteSpline branch_spline(const AgentState& state, const Lane& lane, double lateral_offset, double terminal_speed,
                            double horizon_s);

/// Branches ordered offset-major: index = j * |fractions| + k. Each holds
/// T states at steps t+1..t+T; speeds are recomputed from displacements.
std::vector<Trajectory> build_tree(const AgentState& state, const Lane& lane, const TreeConfig& cfg);

/// Straight-line rollout at the last observed velocity, steps t+1..t+T.
Trajectory extrapolate_constant_velocity(const AgentState& last, int t, int horizon, double dt);

/// Constant-velocity futures of every non-target agent in the scene.
std::vector<Trajectory> extrapolate_others(const PredictionScene& scene, int horizon);

}  // namespace mpf
