#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpf/geometry.hpp"

namespace mpf {

/// Planar agent state at an integer step index. Heading is kept explicitly so
/// a stationary agent keeps its orientation.
struct AgentState {
  double x{0.0};
  double y{0.0};
  double heading{0.0};  // radians, (-pi, pi]
  double speed{0.0};    // m/s, >= 0
  int t{0};

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Throws ValidationError when the state is non-finite or out of range.
void validate(const AgentState& s);

struct Trajectory {
  std::vector<AgentState> states;
  double dt{0.5};

  std::size_t size() const { return states.size(); }
  const AgentState& front() const { return states.front(); }
  const AgentState& back() const { return states.back(); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Non-empty, dt > 0, consecutive step indices.
void validate(const Trajectory& traj);

/// Polyline lane with a speed limit. Immutable after construction; keeps
/// cumulative arc lengths for fast arc-length lookups.
class Lane {
 public:
  Lane(std::string id, std::vector<Vec2> polyline, double speed_limit);

  const std::string& id() const { return id_; }
  std::span<const Vec2> polyline() const { return polyline_; }
  double speed_limit() const { return speed_limit_; }
  double length() const { return cumulative_.back(); }

  /// Point on the centerline at arc length s. Beyond either end the first or
  /// last segment is extended along its tangent.
  Vec2 point_at(double s) const;
  double heading_at(double s) const;

  Projection project(Vec2 p) const { return index_.project(p); }

  friend bool operator==(const Lane& a, const Lane& b) {
    return a.id_ == b.id_ && a.polyline_ == b.polyline_ && a.speed_limit_ == b.speed_limit_;
  }

 private:
  std::size_t segment_for(double s) const;

  std::string id_;
  std::vector<Vec2> polyline_;
  double speed_limit_;
  std::vector<double> cumulative_;
  PolylineIndex index_;
};

struct LaneMap {
  std::vector<Lane> lanes;

  const Lane* find(const std::string& id) const;
  friend bool operator==(const LaneMap&, const LaneMap&) = default;
};

/// Non-empty with unique lane ids.
void validate(const LaneMap& map);

struct Episode {
  std::string id;
  double dt{0.5};
  std::map<std::string, Trajectory> agents;
  std::string target_agent_id;

  const Trajectory& target() const { return agents.at(target_agent_id); }
  friend bool operator==(const Episode&, const Episode&) = default;
};

void validate(const Episode& ep);

/// Everything a predictor may condition on at step t: histories over
/// t-H..t for every agent present, the map, and the target id.
struct PredictionScene {
  std::string episode_id;
  std::map<std::string, Trajectory> histories;
  std::shared_ptr<const LaneMap> map;
  std::string target_agent_id;
  int t{0};
  double dt{0.5};

  const Trajectory& target_history() const { return histories.at(target_agent_id); }
  const AgentState& target_state() const { return target_history().back(); }
};

/// N sampled futures, each exactly T states at steps t+1..t+T.
struct TrajectorySamples {
  std::vector<Trajectory> samples;
  std::string source_label;

  std::size_t size() const { return samples.size(); }
};

/// Throws ValidationError unless every sample has T states starting at
/// step t+1 with the given dt.
void validate(const TrajectorySamples& s, int t, int horizon, double dt);

}  // namespace mpf
