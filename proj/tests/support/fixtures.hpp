#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "mpf/types.hpp"

namespace mpf::testing {

/// Straight lane along +x from (x0, y) to (x0 + length, y), sampled every 1 m.
inline Lane straight_lane(const std::string& id, double length = 200.0, double y = 0.0, double limit = 12.0,
                          double x0 = 0.0) {
  std::vector<Vec2> pts;
  for (int i = 0; i <= static_cast<int>(length); ++i) pts.push_back({x0 + i, y});
  return Lane(id, pts, limit);
}

inline std::shared_ptr<const LaneMap> single_lane_map(double limit = 12.0) {
  auto map = std::make_shared<LaneMap>();
  map->lanes.push_back(straight_lane("main", 200.0, 0.0, limit));
  return map;
}

/// History of an agent moving along +x at constant speed, ending at step t.
inline Trajectory straight_history(double x_end, double y, double speed, int t, int history, double dt = 0.5) {
  Trajectory traj;
  traj.dt = dt;
  for (int k = t - history; k <= t; ++k) {
    const double x = x_end - speed * dt * (t - k);
    traj.states.push_back({x, y, 0.0, speed, k});
  }
  return traj;
}

/// Scene with a single target agent cruising along the lane.
inline PredictionScene cruising_scene(std::shared_ptr<const LaneMap> map, double speed = 8.0, double y = 0.0,
                                      int t = 4) {
  PredictionScene scene;
  scene.episode_id = "fixture";
  scene.map = std::move(map);
  scene.target_agent_id = "target";
  scene.t = t;
  scene.dt = 0.5;
  scene.histories["target"] = straight_history(40.0, y, speed, t, 4);
  return scene;
}

}  // namespace mpf::testing
