#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpf/types.hpp"

namespace mpf {

/// In-memory form of a dataset file: one map shared by every episode.
struct Dataset {
  double dt{0.5};
  std::shared_ptr<const LaneMap> map;
  std::vector<Episode> episodes;
};

bool operator==(const Dataset& a, const Dataset& b);

Dataset parse_dataset(const nlohmann::json& doc);
nlohmann::json dataset_to_json(const Dataset& data);

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& data, const std::filesystem::path& path);
std::string dump_dataset(const Dataset& data);

/// One scene per step t with at least H past and T future target states.
/// Too-short episodes yield an empty list.
std::vector<PredictionScene> extract_scenes(const Episode& episode, std::shared_ptr<const LaneMap> map, int history,
                                            int horizon);

/// Target states t+1..t+T of the episode.
Trajectory future_truth(const Episode& episode, int t, int horizon);

// JSON pieces shared with the external predictor protocol.
nlohmann::json state_to_json(const AgentState& s);
nlohmann::json lane_to_json(const Lane& lane);
nlohmann::json map_to_json(const LaneMap& map);
nlohmann::json scene_to_json(const PredictionScene& scene);
LaneMap parse_map(const nlohmann::json& j, const std::string& ctx);
PredictionScene parse_scene(const nlohmann::json& j);

}  // namespace mpf
