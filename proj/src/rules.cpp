#include "mpf/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpf/errors.hpp"

namespace mpf {

void validate(const RuleParams& p) {
  if (!(p.d_safe > 0.0) || !(p.lat_max > 0.0) || !(p.theta_max > 0.0) || !(p.v_margin_ref > 0.0) ||
      !(p.collision_cap > 0.0))
    throw ValidationError("rule parameters must be strictly positive");
}

double rob_collision(const Trajectory& traj, std::span<const Trajectory> others, double d_safe, double cap) {
  double rob = cap;
  for (const auto& other : others) {
    const std::size_t n = std::min(traj.states.size(), other.states.size());
    for (std::size_t k = 0; k < n; ++k)
      rob = std::min(rob, distance(traj.states[k].position(), other.states[k].position()) - d_safe);
  }
  return rob;
}

double rob_lane_follow(const Trajectory& traj, const Lane& lane, double lat_max) {
  double rob = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) rob = std::min(rob, lat_max - std::abs(lane.project(s.position()).lateral_offset));
  return rob;
}

double rob_orientation(const Trajectory& traj, const Lane& lane, double theta_max) {
  double rob = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) {
    const double tangent = lane.project(s.position()).tangent_heading;
    rob = std::min(rob, theta_max - std::abs(wrap_angle(s.heading - tangent)));
  }
  return rob;
}

double rob_speed(const Trajectory& traj, double v_limit) {
  double rob = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) rob = std::min(rob, v_limit - s.speed);
  return rob;
}

RobustnessVector robustness_vector(const Trajectory& traj, std::span<const Trajectory> others, const Lane& lane,
                                   const RuleParams& params) {
  // Lane-follow and orientation share one projection per state.
  double lat = std::numeric_limits<double>::infinity();
  double orient = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) {
    const Projection p = lane.project(s.position());
    lat = std::min(lat, params.lat_max - std::abs(p.lateral_offset));
    orient = std::min(orient, params.theta_max - std::abs(wrap_angle(s.heading - p.tangent_heading)));
  }
  return RobustnessVector{{rob_collision(traj, others, params.d_safe, params.collision_cap) / params.d_safe,
                           lat / params.lat_max, orient / params.theta_max,
                           rob_speed(traj, lane.speed_limit()) / params.v_margin_ref}};
}

}  // namespace mpf
