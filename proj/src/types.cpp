#include "mpf/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "mpf/errors.hpp"

namespace mpf {

void validate(const AgentState& s) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.heading) || !std::isfinite(s.speed))
    throw ValidationError("agent state at t=" + std::to_string(s.t) + " has non-finite fields");
  if (s.heading <= -std::numbers::pi || s.heading > std::numbers::pi)
    throw ValidationError("heading at t=" + std::to_string(s.t) + " outside (-pi, pi]");
  if (s.speed < 0.0) throw ValidationError("negative speed at t=" + std::to_string(s.t));
  if (s.t < 0) throw ValidationError("negative step index " + std::to_string(s.t));
}

void validate(const Trajectory& traj) {
  if (traj.states.empty()) throw ValidationError("empty trajectory");
  if (!(traj.dt > 0.0) || !std::isfinite(traj.dt)) throw ValidationError("trajectory dt must be positive");
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    validate(traj.states[i]);
    if (i > 0 && traj.states[i].t != traj.states[i - 1].t + 1)
      throw ValidationError("step indices not consecutive at t=" + std::to_string(traj.states[i].t));
  }
}

Lane::Lane(std::string id, std::vector<Vec2> polyline, double speed_limit)
    : id_(std::move(id)), polyline_(std::move(polyline)), speed_limit_(speed_limit) {
  if (polyline_.size() < 2) throw ValidationError("lane '" + id_ + "': polyline needs at least 2 points");
  if (!(speed_limit_ > 0.0) || !std::isfinite(speed_limit_))
    throw ValidationError("lane '" + id_ + "': speed_limit must be positive");
  cumulative_.reserve(polyline_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < polyline_.size(); ++i) {
    if (!std::isfinite(polyline_[i + 1].x) || !std::isfinite(polyline_[i + 1].y))
      throw ValidationError("lane '" + id_ + "': non-finite polyline point");
    const double len = distance(polyline_[i], polyline_[i + 1]);
    if (len <= 0.0) throw ValidationError("lane '" + id_ + "': zero-length segment at index " + std::to_string(i));
    cumulative_.push_back(cumulative_.back() + len);
  }
  index_ = PolylineIndex(polyline_);
}

std::size_t Lane::segment_for(double s) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  if (it == cumulative_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
  return std::min(idx, polyline_.size() - 2);
}

Vec2 Lane::point_at(double s) const {
  const std::size_t i = segment_for(s);
  const Vec2 a = polyline_[i];
  const Vec2 d = polyline_[i + 1] - a;
  const double len = cumulative_[i + 1] - cumulative_[i];
  return a + ((s - cumulative_[i]) / len) * d;
}

double Lane::heading_at(double s) const {
  const std::size_t i = segment_for(s);
  const Vec2 d = polyline_[i + 1] - polyline_[i];
  return std::atan2(d.y, d.x);
}

const Lane* LaneMap::find(const std::string& id) const {
  for (const auto& lane : lanes)
    if (lane.id() == id) return &lane;
  return nullptr;
}

void validate(const LaneMap& map) {
  if (map.lanes.empty()) throw ValidationError("map has no lanes");
  std::set<std::string> ids;
  for (const auto& lane : map.lanes)
    if (!ids.insert(lane.id()).second) throw ValidationError("duplicate lane id '" + lane.id() + "'");
}

void validate(const Episode& ep) {
  if (!(ep.dt > 0.0)) throw ValidationError("episode '" + ep.id + "': dt must be positive");
  if (!ep.agents.contains(ep.target_agent_id))
    throw ValidationError("episode '" + ep.id + "': target agent '" + ep.target_agent_id + "' not present");
  for (const auto& [agent_id, traj] : ep.agents) {
    try {
      validate(traj);
    } catch (const ValidationError& e) {
      throw ValidationError("episode '" + ep.id + "', agent '" + agent_id + "': " + e.what());
    }
    if (traj.dt != ep.dt)
      throw ValidationError("episode '" + ep.id + "', agent '" + agent_id + "': dt differs from episode dt");
  }
}

void validate(const TrajectorySamples& s, int t, int horizon, double dt) {
  if (s.samples.empty()) throw ValidationError("sample set '" + s.source_label + "' is empty");
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const auto& traj = s.samples[i];
    const std::string where = "sample " + std::to_string(i) + " of '" + s.source_label + "': ";
    if (traj.states.size() != static_cast<std::size_t>(horizon))
      throw ValidationError(where + "expected " + std::to_string(horizon) + " states, got " +
                            std::to_string(traj.states.size()));
    if (traj.dt != dt) throw ValidationError(where + "dt mismatch");
    if (traj.states.front().t != t + 1) throw ValidationError(where + "must start at step t+1");
    try {
      validate(traj);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
}

}  // namespace mpf
