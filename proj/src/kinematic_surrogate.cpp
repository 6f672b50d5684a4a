#include "mpf/kinematic_surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpf/errors.hpp"
#include "mpf/rh_predictor.hpp"

namespace mpf {

void validate(const KinematicMixtureConfig& cfg) {
  double total = 0.0;
  for (double w : cfg.mode_weights) {
    if (!(w >= 0.0)) throw ValidationError("mode weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("mode weights must sum to 1");
  if (!(cfg.accel_noise_std >= 0.0) || !(cfg.yawrate_noise_std >= 0.0))
    throw ValidationError("noise standard deviations must be non-negative");
  if (!(cfg.deceleration >= 0.0)) throw ValidationError("deceleration must be non-negative");
}

KinematicSurrogate::KinematicSurrogate(KinematicMixtureConfig cfg) : cfg_(cfg) { validate(cfg_); }

Trajectory KinematicSurrogate::rollout(const AgentState& start, KinematicMode mode, int horizon, double dt,
                                       Rng& rng) const {
  double accel = 0.0;
  double yaw_rate = 0.0;
  switch (mode) {
    case KinematicMode::ConstantVelocity: break;
    case KinematicMode::Decelerate: accel = -cfg_.deceleration; break;
    case KinematicMode::TurnLeft: yaw_rate = cfg_.turn_yaw_rate; break;
    case KinematicMode::TurnRight: yaw_rate = -cfg_.turn_yaw_rate; break;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);

  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(horizon);
  AgentState s = start;
  for (int k = 1; k <= horizon; ++k) {
    const double a = accel + cfg_.accel_noise_std * gauss(rng);
    const double w = yaw_rate + cfg_.yawrate_noise_std * gauss(rng);
    s.speed = std::max(0.0, s.speed + a * dt);
    s.heading = wrap_angle(s.heading + w * dt);
    s.x += s.speed * std::cos(s.heading) * dt;
    s.y += s.speed * std::sin(s.heading) * dt;
    s.t = start.t + k;
    traj.states.push_back(s);
  }
  return traj;
}

TrajectorySamples KinematicSurrogate::sample(const PredictionScene& scene, int n, int horizon,
                                             std::uint64_t seed) const {
  const auto it = scene.histories.find(scene.target_agent_id);
  if (it == scene.histories.end() || it->second.states.empty())
    throw RuntimeFailure("kinematic surrogate needs a non-empty target history");
  const AgentState& start = it->second.back();

  Rng rng(seed);
  TrajectorySamples out;
  out.source_label = name();
  out.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto mode = static_cast<KinematicMode>(draw_categorical(cfg_.mode_weights, uniform01(rng)));
    out.samples.push_back(rollout(start, mode, horizon, scene.dt, rng));
  }
  return out;
}

}  // namespace mpf
