#include "mpf/tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mpf/errors.hpp"

namespace mpf {

namespace {

constexpr int kArcSamples = 48;
constexpr double kTiny = 1e-9;

}  // namespace

void validate(const TreeConfig& cfg) {
  if (cfg.lateral_offsets.empty() || cfg.terminal_speed_fractions.empty())
    throw ValidationError("trajectory tree needs at least one offset and one speed fraction");
  if (cfg.horizon < 1) throw ValidationError("tree horizon must be >= 1");
  if (!(cfg.dt > 0.0)) throw ValidationError("tree dt must be positive");
  if (!(cfg.w_theta >= 0.0)) throw ValidationError("w_theta must be non-negative");
  for (double f : cfg.terminal_speed_fractions)
    if (!(f >= 0.0)) throw ValidationError("speed fractions must be non-negative");
}

Vec2 HermiteSpline::position(double u) const {
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
}

Vec2 HermiteSpline::derivative(double u) const {
  const double u2 = u * u;
  const double d00 = 6 * u2 - 6 * u;
  const double d10 = 3 * u2 - 4 * u + 1;
  const double d01 = -6 * u2 + 6 * u;
  const double d11 = 3 * u2 - 2 * u;
  return d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1;
}

const Lane& select_lane(const AgentState& state, const LaneMap& map, double w_theta) {
  if (map.lanes.empty()) throw ValidationError("select_lane: map has no lanes");
  const Lane* best = nullptr;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& lane : map.lanes) {
    const Projection p = lane.project(state.position());
    const double cost = std::abs(p.lateral_offset) + w_theta * std::abs(wrap_angle(state.heading - p.tangent_heading));
    if (cost < best_cost || (cost == best_cost && lane.id() < best->id())) {
      best_cost = cost;
      best = &lane;
    }
  }
  return *best;
}

HermiteSpline branch_spline(const AgentState& state, const Lane& lane, double lateral_offset, double terminal_speed,
                            double horizon_s) {
  const Vec2 start = state.position();
  const double s0 = lane.project(start).arc_length;
  const double travel = 0.5 * (state.speed + terminal_speed) * horizon_s;
  const double s_end = s0 + travel;
  const double end_heading = lane.heading_at(s_end);
  const Vec2 end = lane.point_at(s_end) + lateral_offset * left_normal(end_heading);
  const double chord = distance(start, end);
  return HermiteSpline{start, end, chord * unit_from_heading(state.heading), chord * unit_from_heading(end_heading)};
}

std::vector<Trajectory> build_tree(const AgentState& state, const Lane& lane, const TreeConfig& cfg) {
  const double horizon_s = cfg.horizon * cfg.dt;
  const double v0 = state.speed;
  std::vector<Trajectory> tree;
  tree.reserve(cfg.branch_count());

  for (double offset : cfg.lateral_offsets) {
    for (double fraction : cfg.terminal_speed_fractions) {
      const double v_end = fraction * lane.speed_limit();
      const double travel = 0.5 * (v0 + v_end) * horizon_s;
      const HermiteSpline spline = branch_spline(state, lane, offset, v_end, horizon_s);

      // Arc-length table so positions follow the speed profile in time.
      std::array<double, kArcSamples + 1> arc{};
      Vec2 prev = spline.p0;
      for (int i = 1; i <= kArcSamples; ++i) {
        const Vec2 p = spline.position(static_cast<double>(i) / kArcSamples);
        arc[i] = arc[i - 1] + distance(prev, p);
        prev = p;
      }
      const double spline_len = arc[kArcSamples];

      Trajectory branch;
      branch.dt = cfg.dt;
      branch.states.reserve(cfg.horizon);
      if (travel <= kTiny) {
        // Nothing to travel: the branch holds the current pose.
        for (int k = 1; k <= cfg.horizon; ++k)
          branch.states.push_back({state.x, state.y, state.heading, 0.0, state.t + k});
        tree.push_back(std::move(branch));
        continue;
      }
      Vec2 last_pos = spline.p0;
      double last_heading = state.heading;
      for (int k = 1; k <= cfg.horizon; ++k) {
        const double tau = k * cfg.dt;
        const double progress = (v0 * tau + 0.5 * (v_end - v0) * tau * tau / horizon_s) / travel;
        const double target = std::clamp(progress, 0.0, 1.0) * spline_len;
        double u = 0.0;
        if (spline_len > kTiny) {
          auto it = std::lower_bound(arc.begin(), arc.end(), target);
          const auto i = static_cast<int>(std::clamp<std::ptrdiff_t>(it - arc.begin(), 1, kArcSamples));
          const double span = arc[i] - arc[i - 1];
          const double w = span > 0.0 ? (target - arc[i - 1]) / span : 0.0;
          u = (i - 1 + std::clamp(w, 0.0, 1.0)) / kArcSamples;
        }
        const Vec2 pos = spline_len > kTiny ? spline.position(u) : spline.p0;
        const Vec2 deriv = spline.derivative(u);
        const double heading = norm(deriv) > kTiny ? std::atan2(deriv.y, deriv.x) : last_heading;

        AgentState s;
        s.x = pos.x;
        s.y = pos.y;
        s.heading = wrap_angle(heading);
        s.speed = distance(pos, last_pos) / cfg.dt;
        s.t = state.t + k;
        branch.states.push_back(s);
        last_pos = pos;
        last_heading = heading;
      }
      tree.push_back(std::move(branch));
    }
  }
  return tree;
}

Trajectory extrapolate_constant_velocity(const AgentState& last, int t, int horizon, double dt) {
  Trajectory out;
  out.dt = dt;
  out.states.reserve(horizon);
  const Vec2 v = last.speed * unit_from_heading(last.heading);
  for (int k = 1; k <= horizon; ++k) {
    const double elapsed = (t + k - last.t) * dt;
    AgentState s = last;
    s.x = last.x + v.x * elapsed;
    s.y = last.y + v.y * elapsed;
    s.t = t + k;
    out.states.push_back(s);
  }
  return out;
}

std::vector<Trajectory> extrapolate_others(const PredictionScene& scene, int horizon) {
  std::vector<Trajectory> others;
  for (const auto& [id, hist] : scene.histories) {
    if (id == scene.target_agent_id || hist.states.empty()) continue;
    others.push_back(extrapolate_constant_velocity(hist.back(), scene.t, horizon, scene.dt));
  }
  return others;
}

}  // namespace mpf
