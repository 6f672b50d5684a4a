#include "mpf/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mpf/errors.hpp"
#include "mpf/seeding.hpp"

namespace mpf {

namespace {

constexpr double kSampleStep = 1.0;  // m between polyline vertices
constexpr double kForkEntry = 120.0;  // m of shared entry before the split
constexpr double kForkSplitTime = 5.5;  // s until a fork target reaches the split
constexpr double kRegionSpacing = 2000.0;  // m between kinds in a suite map

/// Piecewise-constant-curvature path; sampled poses carry headings so that
/// parallel lanes can be offset exactly.
struct PathPiece {
  double length;
  double curvature;
};

struct Pose {
  Vec2 p;
  double heading;
};

std::vector<Pose> sample_path(Pose start, const std::vector<PathPiece>& pieces) {
  std::vector<Pose> out{start};
  Pose cur = start;
  for (const auto& piece : pieces) {
    const int steps = std::max(1, static_cast<int>(std::ceil(piece.length / kSampleStep)));
    const double ds = piece.length / steps;
    const Pose base = cur;
    for (int i = 1; i <= steps; ++i) {
      const double s = ds * i;
      Pose next;
      if (std::abs(piece.curvature) < 1e-12) {
        next.p = base.p + s * unit_from_heading(base.heading);
        next.heading = base.heading;
      } else {
        const double k = piece.curvature;
        next.heading = base.heading + k * s;
        next.p = base.p + Vec2{(std::sin(next.heading) - std::sin(base.heading)) / k,
                               (std::cos(base.heading) - std::cos(next.heading)) / k};
      }
      out.push_back(next);
    }
    cur = out.back();
  }
  return out;
}

std::vector<Vec2> offset_polyline(const std::vector<Pose>& path, double offset, bool reversed) {
  std::vector<Vec2> pts;
  pts.reserve(path.size());
  for (const auto& pose : path) pts.push_back(pose.p + offset * left_normal(pose.heading));
  if (reversed) std::reverse(pts.begin(), pts.end());
  return pts;
}

std::vector<PathPiece> main_pieces(const ScenarioSpec& spec, double branch_sign) {
  switch (spec.kind) {
    case ScenarioKind::Straight:
    case ScenarioKind::Violator: return {{400.0, 0.0}};
    case ScenarioKind::Turn:
      return {{60.0, 0.0}, {spec.turn_radius * std::numbers::pi / 2.0, 1.0 / spec.turn_radius}, {200.0, 0.0}};
    case ScenarioKind::Fork: {
      const double r = 40.0;
      return {{kForkEntry, 0.0}, {r * spec.fork_angle, branch_sign / r}, {200.0, 0.0}};
    }
  }
  return {};
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Straight: return "straight";
    case ScenarioKind::Turn: return "turn";
    case ScenarioKind::Fork: return "fork";
    case ScenarioKind::Violator: return "violator";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& s) {
  if (s == "straight") return ScenarioKind::Straight;
  if (s == "turn") return ScenarioKind::Turn;
  if (s == "fork") return ScenarioKind::Fork;
  if (s == "violator") return ScenarioKind::Violator;
  throw ValidationError("unknown scenario kind '" + s + "'");
}

void validate(const ScenarioSpec& spec, int min_length) {
  if (spec.episodes < 0) throw ValidationError("scenario episodes must be >= 0");
  if (spec.episode_length < min_length)
    throw ValidationError("episode_length must be >= " + std::to_string(min_length));
  if (!(spec.dt > 0.0)) throw ValidationError("scenario dt must be positive");
  if (!(spec.speed_limit > 0.0)) throw ValidationError("speed_limit must be positive");
  if (!(spec.target_speed_fraction > 0.0) || !(spec.speed_jitter >= 0.0) ||
      spec.speed_jitter >= spec.target_speed_fraction)
    throw ValidationError("target speed fraction must be positive and exceed its jitter");
  if (!(spec.turn_radius > spec.lane_width)) throw ValidationError("turn_radius must exceed the lane width");
  if (!(spec.fork_angle > 0.0 && spec.fork_angle < std::numbers::pi / 2.0))
    throw ValidationError("fork_angle must lie in (0, pi/2)");
  if (!(spec.violator_speed_factor > 1.0)) throw ValidationError("violator_speed_factor must exceed 1");
  if (spec.background_agents < 0) throw ValidationError("background_agents must be >= 0");
  if (!(spec.accel_noise_std >= 0.0) || !(spec.yawrate_noise_std >= 0.0))
    throw ValidationError("noise levels must be non-negative");
  if (!(spec.lane_width > 0.0)) throw ValidationError("lane_width must be positive");
}

LaneMap scenario_map(const ScenarioSpec& spec, Vec2 origin, const std::string& prefix) {
  LaneMap map;
  const Pose start{origin, 0.0};
  if (spec.kind == ScenarioKind::Fork) {
    // Both branches share the entry polyline point for point.
    const auto left = sample_path(start, main_pieces(spec, +1.0));
    const auto right = sample_path(start, main_pieces(spec, -1.0));
    map.lanes.emplace_back(prefix + "fork_left", offset_polyline(left, 0.0, false), spec.speed_limit);
    map.lanes.emplace_back(prefix + "fork_right", offset_polyline(right, 0.0, false), spec.speed_limit);
    const auto entry = sample_path(start, {{kForkEntry, 0.0}});
    map.lanes.emplace_back(prefix + "fork_opposite", offset_polyline(entry, spec.lane_width, true), spec.speed_limit);
    return map;
  }
  const auto path = sample_path(start, main_pieces(spec, 0.0));
  const std::string kind = to_string(spec.kind);
  map.lanes.emplace_back(prefix + kind + "_main", offset_polyline(path, 0.0, false), spec.speed_limit);
  map.lanes.emplace_back(prefix + kind + "_opposite", offset_polyline(path, spec.lane_width, true), spec.speed_limit);
  return map;
}

namespace {

struct DriveParams {
  double s_start;
  double v_init;
  double v_cruise;
  double accel_std;
  double yaw_std;
};

/// Pure-pursuit lane follower with speed tracking. Noise is drawn once per
/// step and held over the integration substeps.
Trajectory drive_lane(const Lane& lane, const DriveParams& p, int steps, double dt, Rng& rng) {
  constexpr int kSubsteps = 10;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec2 pos = lane.point_at(p.s_start);
  double heading = lane.heading_at(p.s_start);
  double v = p.v_init;

  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    traj.states.push_back(AgentState{pos.x, pos.y, wrap_angle(heading), v, k});
    if (k + 1 == steps) break;
    const double accel_noise = p.accel_std * gauss(rng);
    const double yaw_noise = p.yaw_std * gauss(rng);
    const double h = dt / kSubsteps;
    for (int i = 0; i < kSubsteps; ++i) {
      const double lookahead = std::max(6.0, v);
      const Vec2 aim = lane.point_at(lane.project(pos).arc_length + lookahead) - pos;
      const double alpha = wrap_angle(std::atan2(aim.y, aim.x) - heading);
      const double curvature = 2.0 * std::sin(alpha) / lookahead;
      const double accel = 0.5 * (p.v_cruise - v) + accel_noise;
      v = std::max(0.0, v + accel * h);
      heading += (v * curvature + yaw_noise) * h;
      pos = pos + (v * h) * unit_from_heading(heading);
    }
  }
  return traj;
}

std::string episode_name(ScenarioKind kind, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03d", index);
  return to_string(kind) + buf;
}

ScenarioBatch generate_at(const ScenarioSpec& spec, Vec2 origin) {
  validate(spec);
  ScenarioBatch batch;
  batch.map = scenario_map(spec, origin);
  const std::string kind = to_string(spec.kind);
  const Lane* opposite = nullptr;
  for (const auto& lane : batch.map.lanes)
    if (lane.id().ends_with("_opposite")) opposite = &lane;

  for (int i = 0; i < spec.episodes; ++i) {
    Rng rng(derive_seed(spec.seed, kind, i, "episode"));
    Episode ep;
    ep.id = episode_name(spec.kind, i);
    ep.dt = spec.dt;
    ep.target_agent_id = "target";

    const double fraction =
        spec.target_speed_fraction + spec.speed_jitter * (2.0 * uniform01(rng) - 1.0);
    double cruise = fraction * spec.speed_limit;
    if (spec.kind == ScenarioKind::Violator) cruise = spec.violator_speed_factor * spec.speed_limit;

    const Lane* lane = &batch.map.lanes.front();
    double s_start = 20.0 * uniform01(rng);
    if (spec.kind == ScenarioKind::Fork) {
      if (fork_choice(spec, i) == "right") lane = &batch.map.lanes[1];
      s_start = std::max(0.0, kForkEntry - cruise * kForkSplitTime + 10.0 * (uniform01(rng) - 0.5));
    }
    const DriveParams target{s_start, cruise, cruise, spec.accel_noise_std, spec.yawrate_noise_std};
    ep.agents.emplace("target", drive_lane(*lane, target, spec.episode_length, spec.dt, rng));

    for (int b = 0; b < spec.background_agents && opposite; ++b) {
      const double v = spec.speed_limit * (0.7 + 0.2 * uniform01(rng));
      const double s0 = opposite->length() * (0.2 + 0.5 * uniform01(rng));
      const DriveParams bg{s0, v, v, spec.accel_noise_std, spec.yawrate_noise_std};
      ep.agents.emplace("bg" + std::to_string(b), drive_lane(*opposite, bg, spec.episode_length, spec.dt, rng));
    }
    validate(ep);
    batch.episodes.push_back(std::move(ep));
  }
  return batch;
}

}  // namespace

std::string fork_choice(const ScenarioSpec& spec, int episode_index) {
  if (spec.kind != ScenarioKind::Fork) return {};
  Rng rng(derive_seed(spec.seed, "fork", episode_index, "branch"));
  return uniform01(rng) < 0.5 ? "left" : "right";
}

ScenarioBatch generate(const ScenarioSpec& spec) { return generate_at(spec, {}); }

Dataset generate_suite(const SuiteConfig& cfg) {
  Dataset data;
  data.dt = cfg.base.dt;
  LaneMap map;
  const std::pair<ScenarioKind, int> kinds[] = {{ScenarioKind::Straight, cfg.straight},
                                                {ScenarioKind::Turn, cfg.turn},
                                                {ScenarioKind::Fork, cfg.fork},
                                                {ScenarioKind::Violator, cfg.violator}};
  int region = 0;
  for (const auto& [kind, count] : kinds) {
    ScenarioSpec spec = cfg.base;
    spec.kind = kind;
    spec.episodes = count;
    spec.seed = derive_seed(cfg.seed, "suite", region, to_string(kind));
    ScenarioBatch batch = generate_at(spec, Vec2{0.0, kRegionSpacing * region});
    ++region;
    if (count == 0) continue;
    for (auto& lane : batch.map.lanes) map.lanes.push_back(std::move(lane));
    for (auto& ep : batch.episodes) data.episodes.push_back(std::move(ep));
  }
  validate(map);
  data.map = std::make_shared<const LaneMap>(std::move(map));
  return data;
}

std::string scenario_group(const std::string& episode_id) {
  const auto pos = episode_id.find('_');
  return pos == std::string::npos ? episode_id : episode_id.substr(0, pos);
}

}  // namespace mpf
