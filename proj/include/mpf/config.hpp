#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpf/fuser.hpp"
#include "mpf/kinematic_surrogate.hpp"
#include "mpf/rh_predictor.hpp"
#include "mpf/scenarios.hpp"

namespace mpf {

/// Everything a run needs. Serializes to a nested JSON document whose
/// dotted key paths ("fuser.eta", "tree.w_theta", ...) double as CLI flags.
struct RunConfig {
  std::string dataset;  // dataset file; empty means "generate `suite` in memory"
  SuiteConfig suite;

  // Predictor slots: "surrogate", "rh", or "external:<shell command>".
  std::string learned_predictor{"surrogate"};
  std::string rule_predictor{"rh"};
  double external_timeout{5.0};  // s

  KinematicMixtureConfig surrogate;
  RhConfig rh;
  FuserConfig fuser;

  int n{20};
  int horizon{8};
  int history{4};
  std::uint64_t seed{0};
  std::string out{"mpf_out"};
  int workers{1};
};

void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
/// Strict: unknown keys and wrong types raise ParseError naming the key.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const SuiteConfig& cfg);
SuiteConfig suite_config_from_json(const nlohmann::json& j);

/// Every leaf key path of a JSON object, dotted.
std::vector<std::string> dotted_keys(const nlohmann::json& j);

/// Replace the leaf at `dotted_key`. String leaves take the value verbatim;
/// anything else reads it as JSON, falling back to a plain string.
void apply_override(nlohmann::json& doc, const std::string& dotted_key, const std::string& value);

}  // namespace mpf
