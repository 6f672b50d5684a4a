#include "mpf/dataset.hpp"

#include <fstream>
#include <sstream>

#include "mpf/errors.hpp"

namespace mpf {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(ctx + "." + key + ": missing field");
  return *it;
}

double number(const json& j, const char* key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number()) throw ParseError(ctx + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& j, const char* key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number_integer()) throw ParseError(ctx + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string string(const json& j, const char* key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_string()) throw ParseError(ctx + "." + key + ": expected a string");
  return v.get<std::string>();
}

const json& array(const json& j, const char* key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_array()) throw ParseError(ctx + "." + key + ": expected an array");
  return v;
}

AgentState parse_state(const json& j, const std::string& ctx) {
  AgentState s;
  s.t = integer(j, "t", ctx);
  s.x = number(j, "x", ctx);
  s.y = number(j, "y", ctx);
  s.heading = wrap_angle(number(j, "heading", ctx));
  s.speed = number(j, "v", ctx);
  return s;
}

Trajectory parse_trajectory(const json& j, double dt, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array of states");
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) traj.states.push_back(parse_state(j[i], ctx + "[" + std::to_string(i) + "]"));
  return traj;
}

json trajectory_to_json(const Trajectory& traj) {
  json arr = json::array();
  for (const auto& s : traj.states) arr.push_back(state_to_json(s));
  return arr;
}

}  // namespace

json state_to_json(const AgentState& s) {
  return json{{"t", s.t}, {"x", s.x}, {"y", s.y}, {"heading", s.heading}, {"v", s.speed}};
}

json lane_to_json(const Lane& lane) {
  json pts = json::array();
  for (const auto& p : lane.polyline()) pts.push_back(json::array({p.x, p.y}));
  return json{{"id", lane.id()}, {"speed_limit", lane.speed_limit()}, {"polyline", pts}};
}

json map_to_json(const LaneMap& map) {
  json lanes = json::array();
  for (const auto& lane : map.lanes) lanes.push_back(lane_to_json(lane));
  return json{{"lanes", lanes}};
}

LaneMap parse_map(const json& j, const std::string& ctx) {
  LaneMap map;
  const json& lanes = array(j, "lanes", ctx);
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const std::string lctx = ctx + ".lanes[" + std::to_string(i) + "]";
    const std::string id = string(lanes[i], "id", lctx);
    const double limit = number(lanes[i], "speed_limit", lctx);
    const json& pts = array(lanes[i], "polyline", lctx);
    std::vector<Vec2> polyline;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const json& p = pts[k];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ParseError(lctx + ".polyline[" + std::to_string(k) + "]: expected [x, y]");
      polyline.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    try {
      map.lanes.emplace_back(id, std::move(polyline), limit);
    } catch (const ValidationError& e) {
      throw ValidationError(lctx + ": " + e.what());
    }
  }
  validate(map);
  return map;
}

Dataset parse_dataset(const json& doc) {
  Dataset data;
  data.dt = number(doc, "dt", "$");
  if (!(data.dt > 0.0)) throw ValidationError("$.dt: must be positive");
  data.map = std::make_shared<const LaneMap>(parse_map(field(doc, "map", "$"), "$.map"));
  const json& eps = array(doc, "episodes", "$");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const std::string ctx = "$.episodes[" + std::to_string(i) + "]";
    Episode ep;
    ep.id = string(eps[i], "id", ctx);
    ep.dt = data.dt;
    ep.target_agent_id = string(eps[i], "target_agent_id", ctx);
    const json& agents = field(eps[i], "agents", ctx);
    if (!agents.is_object()) throw ParseError(ctx + ".agents: expected an object");
    for (const auto& [agent_id, states] : agents.items())
      ep.agents.emplace(agent_id, parse_trajectory(states, data.dt, ctx + ".agents." + agent_id));
    validate(ep);
    data.episodes.push_back(std::move(ep));
  }
  return data;
}

json dataset_to_json(const Dataset& data) {
  json eps = json::array();
  for (const auto& ep : data.episodes) {
    json agents = json::object();
    for (const auto& [id, traj] : ep.agents) agents[id] = trajectory_to_json(traj);
    eps.push_back(json{{"id", ep.id}, {"target_agent_id", ep.target_agent_id}, {"agents", agents}});
  }
  return json{{"dt", data.dt}, {"map", map_to_json(*data.map)}, {"episodes", eps}};
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.dt != b.dt || a.episodes != b.episodes) return false;
  if (!a.map || !b.map) return a.map == b.map;
  return *a.map == *b.map;
}

std::string dump_dataset(const Dataset& data) { return dataset_to_json(data).dump(1) + "\n"; }

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_dataset(doc);
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << dump_dataset(data);
}

std::vector<PredictionScene> extract_scenes(const Episode& episode, std::shared_ptr<const LaneMap> map, int history,
                                            int horizon) {
  if (history < 0 || horizon < 1) throw ValidationError("extract_scenes needs H >= 0 and T >= 1");
  std::vector<PredictionScene> scenes;
  const Trajectory& target = episode.target();
  const int first = target.front().t;
  const int last = target.back().t;
  for (int t = first + history; t + horizon <= last; ++t) {
    PredictionScene scene;
    scene.episode_id = episode.id;
    scene.map = map;
    scene.target_agent_id = episode.target_agent_id;
    scene.t = t;
    scene.dt = episode.dt;
    for (const auto& [id, traj] : episode.agents) {
      Trajectory window;
      window.dt = traj.dt;
      for (const auto& s : traj.states)
        if (s.t >= t - history && s.t <= t) window.states.push_back(s);
      if (!window.states.empty()) scene.histories.emplace(id, std::move(window));
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

Trajectory future_truth(const Episode& episode, int t, int horizon) {
  const Trajectory& target = episode.target();
  Trajectory out;
  out.dt = target.dt;
  for (const auto& s : target.states)
    if (s.t > t && s.t <= t + horizon) out.states.push_back(s);
  if (out.states.size() != static_cast<std::size_t>(horizon))
    throw ValidationError("episode '" + episode.id + "' lacks " + std::to_string(horizon) + " future states after t=" +
                          std::to_string(t));
  return out;
}

json scene_to_json(const PredictionScene& scene) {
  json hist = json::object();
  for (const auto& [id, traj] : scene.histories) hist[id] = trajectory_to_json(traj);
  return json{{"episode_id", scene.episode_id},
              {"t", scene.t},
              {"dt", scene.dt},
              {"target_agent_id", scene.target_agent_id},
              {"map", scene.map ? map_to_json(*scene.map) : json{{"lanes", json::array()}}},
              {"histories", hist}};
}

PredictionScene parse_scene(const json& j) {
  PredictionScene scene;
  scene.episode_id = j.contains("episode_id") ? string(j, "episode_id", "scene") : std::string{};
  scene.t = integer(j, "t", "scene");
  scene.dt = number(j, "dt", "scene");
  scene.target_agent_id = string(j, "target_agent_id", "scene");
  scene.map = std::make_shared<const LaneMap>(parse_map(field(j, "map", "scene"), "scene.map"));
  const json& hist = field(j, "histories", "scene");
  if (!hist.is_object()) throw ParseError("scene.histories: expected an object");
  for (const auto& [id, states] : hist.items())
    scene.histories.emplace(id, parse_trajectory(states, scene.dt, "scene.histories." + id));
  if (!scene.histories.contains(scene.target_agent_id)) throw ValidationError("scene: target history missing");
  return scene;
}

}  // namespace mpf
