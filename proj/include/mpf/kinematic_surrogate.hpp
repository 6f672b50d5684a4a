#pragma once

#include <array>

#include "mpf/predictor.hpp"
#include "mpf/seeding.hpp"

namespace mpf {

enum class KinematicMode { ConstantVelocity = 0, Decelerate = 1, TurnLeft = 2, TurnRight = 3 };

/// Multimodal unicycle mixture standing in for a learned predictor. It
/// ignores the map entirely.
struct KinematicMixtureConfig {
  std::array<double, 4> mode_weights{0.4, 0.2, 0.2, 0.2};  // CV, decelerate, turn left, turn right
  double accel_noise_std{0.5};    // m/s^2
  double yawrate_noise_std{0.05};  // rad/s
  double deceleration{2.0};        // m/s^2, decelerate mode
  double turn_yaw_rate{0.2};       // rad/s, turn modes
};

void validate(const KinematicMixtureConfig& cfg);

class KinematicSurrogate final : public Predictor {
 public:
  explicit KinematicSurrogate(KinematicMixtureConfig cfg = {});

  std::string name() const override { return "surrogate"; }
  TrajectorySamples sample(const PredictionScene& scene, int n, int horizon, std::uint64_t seed) const override;

  /// One rollout in a fixed mode; the noise is drawn from `rng`.
  Trajectory rollout(const AgentState& start, KinematicMode mode, int horizon, double dt, Rng& rng) const;

  const KinematicMixtureConfig& config() const { return cfg_; }

 private:
  KinematicMixtureConfig cfg_;
};

}  // namespace mpf
