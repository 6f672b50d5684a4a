#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mpf/dataset.hpp"

namespace mpf {

enum class ScenarioKind { Straight, Turn, Fork, Violator };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(const std::string& s);

struct ScenarioSpec {
  ScenarioKind kind{ScenarioKind::Straight};
  int episodes{1};
  int episode_length{24};  // steps
  double dt{0.5};
  double speed_limit{12.0};  // m/s
  std::uint64_t seed{0};

  double target_speed_fraction{0.8};  // nominal cruise speed relative to the limit
  double speed_jitter{0.1};           // +- uniform spread of that fraction per episode
  double turn_radius{40.0};           // m
  double fork_angle{0.5235987755982988};  // rad, each branch (30 deg)
  double violator_speed_factor{1.5};
  int background_agents{1};

  double accel_noise_std{0.1};    // m/s^2
  double yawrate_noise_std{0.01};  // rad/s
  double lane_width{3.5};         // m, spacing to the opposite-direction lane
};

/// Throws ValidationError for out-of-range parameters. `min_length` is the
/// H + T + 1 the episodes must support.
void validate(const ScenarioSpec& spec, int min_length = 13);

/// Lanes for one scenario kind, placed at `origin` with ids prefixed by
/// `prefix`.
LaneMap scenario_map(const ScenarioSpec& spec, Vec2 origin = {}, const std::string& prefix = "");

struct ScenarioBatch {
  LaneMap map;
  std::vector<Episode> episodes;
};

/// Deterministic episodes of one kind. Episode ids are "<kind>_<index>".
ScenarioBatch generate(const ScenarioSpec& spec);

/// Which branch a fork episode's target took ("left"/"right"); empty for
/// other kinds. Recorded alongside generation for tests.
std::string fork_choice(const ScenarioSpec& spec, int episode_index);

struct SuiteConfig {
  int straight{50};
  int turn{50};
  int fork{50};
  int violator{50};
  std::uint64_t seed{0};
  ScenarioSpec base;  // shared parameters; kind/episodes/seed are overridden
};

/// All four kinds in one dataset. Each kind occupies its own region of the
/// shared map so lanes never interact across kinds.
Dataset generate_suite(const SuiteConfig& cfg);

/// Episode id prefix up to the first '_' ("straight_007" -> "straight").
std::string scenario_group(const std::string& episode_id);

}  // namespace mpf
