#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "mpf/types.hpp"

namespace mpf {

/// Thresholds of the four-rule hierarchy. Each one also serves as the
/// normalization scale of its rule's robustness.
struct RuleParams {
  double d_safe{2.0};                       // m
  double lat_max{1.75};                     // m
  double theta_max{std::numbers::pi / 4.0};  // rad
  double v_margin_ref{5.0};                 // m/s
  double collision_cap{1e6};                // returned when there is nobody to collide with
};

void validate(const RuleParams& p);

/// Robustness per rule, most important first.
struct RobustnessVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// "Always" semantics: every rule is the minimum of a per-step predicate
// margin over the whole trajectory.

/// min over steps and agents of (center distance - d_safe). `others` are
/// aligned step-by-step with `traj`.
double rob_collision(const Trajectory& traj, std::span<const Trajectory> others, double d_safe,
                     double cap = 1e6);
double rob_lane_follow(const Trajectory& traj, const Lane& lane, double lat_max);
double rob_orientation(const Trajectory& traj, const Lane& lane, double theta_max);
double rob_speed(const Trajectory& traj, double v_limit);

/// (collision, lane-follow, orientation, speed), each divided by its scale.
RobustnessVector robustness_vector(const Trajectory& traj, std::span<const Trajectory> others, const Lane& lane,
                                   const RuleParams& params);

}  // namespace mpf
