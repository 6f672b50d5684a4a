#include "mpf/config.hpp"

#include <fstream>

#include "mpf/errors.hpp"

namespace mpf {

using nlohmann::json;

namespace {

bool same_kind(const json& base, const json& patch) {
  if (base.is_number_integer()) return patch.is_number_integer();
  if (base.is_number()) return patch.is_number();
  if (base.is_object()) return patch.is_object();
  if (base.is_array()) return patch.is_array();
  if (base.is_string()) return patch.is_string();
  if (base.is_boolean()) return patch.is_boolean();
  return true;
}

void merge_strict(json& base, const json& patch, const std::string& path) {
  if (!patch.is_object()) throw ParseError((path.empty() ? "config" : path) + ": expected an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string here = path.empty() ? key : path + "." + key;
    auto it = base.find(key);
    if (it == base.end()) throw ParseError(here + ": unknown key");
    if (!same_kind(*it, value)) throw ParseError(here + ": wrong type (expected " + std::string(it->type_name()) + ")");
    if (it->is_object())
      merge_strict(*it, value, here);
    else
      *it = value;
  }
}

void collect_keys(const json& j, const std::string& prefix, std::vector<std::string>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string here = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object())
      collect_keys(value, here, out);
    else
      out.push_back(here);
  }
}

json scenario_to_json(const ScenarioSpec& s) {
  return json{{"episode_length", s.episode_length},
              {"dt", s.dt},
              {"speed_limit", s.speed_limit},
              {"target_speed_fraction", s.target_speed_fraction},
              {"speed_jitter", s.speed_jitter},
              {"turn_radius", s.turn_radius},
              {"fork_angle", s.fork_angle},
              {"violator_speed_factor", s.violator_speed_factor},
              {"background_agents", s.background_agents},
              {"accel_noise_std", s.accel_noise_std},
              {"yawrate_noise_std", s.yawrate_noise_std},
              {"lane_width", s.lane_width}};
}

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec s;
  s.episode_length = j.at("episode_length").get<int>();
  s.dt = j.at("dt").get<double>();
  s.speed_limit = j.at("speed_limit").get<double>();
  s.target_speed_fraction = j.at("target_speed_fraction").get<double>();
  s.speed_jitter = j.at("speed_jitter").get<double>();
  s.turn_radius = j.at("turn_radius").get<double>();
  s.fork_angle = j.at("fork_angle").get<double>();
  s.violator_speed_factor = j.at("violator_speed_factor").get<double>();
  s.background_agents = j.at("background_agents").get<int>();
  s.accel_noise_std = j.at("accel_noise_std").get<double>();
  s.yawrate_noise_std = j.at("yawrate_noise_std").get<double>();
  s.lane_width = j.at("lane_width").get<double>();
  return s;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

}  // namespace

json to_json(const SuiteConfig& cfg) {
  return json{{"straight", cfg.straight}, {"turn", cfg.turn},     {"fork", cfg.fork},
              {"violator", cfg.violator}, {"seed", cfg.seed},     {"scenario", scenario_to_json(cfg.base)}};
}

SuiteConfig suite_config_from_json(const json& j) {
  json merged = to_json(SuiteConfig{});
  merge_strict(merged, j, "suite");
  return guarded([&] {
    SuiteConfig cfg;
    cfg.straight = merged.at("straight").get<int>();
    cfg.turn = merged.at("turn").get<int>();
    cfg.fork = merged.at("fork").get<int>();
    cfg.violator = merged.at("violator").get<int>();
    cfg.seed = merged.at("seed").get<std::uint64_t>();
    cfg.base = scenario_from_json(merged.at("scenario"));
    return cfg;
  });
}

json to_json(const RunConfig& cfg) {
  const auto& w = cfg.surrogate.mode_weights;
  return json{
      {"dataset", cfg.dataset},
      {"suite", to_json(cfg.suite)},
      {"predictors",
       {{"learned", cfg.learned_predictor}, {"rule", cfg.rule_predictor}, {"external_timeout", cfg.external_timeout}}},
      {"surrogate",
       {{"mode_weights", json::array({w[0], w[1], w[2], w[3]})},
        {"accel_noise_std", cfg.surrogate.accel_noise_std},
        {"yawrate_noise_std", cfg.surrogate.yawrate_noise_std},
        {"deceleration", cfg.surrogate.deceleration},
        {"turn_yaw_rate", cfg.surrogate.turn_yaw_rate}}},
      {"rules",
       {{"d_safe", cfg.rh.rules.d_safe},
        {"lat_max", cfg.rh.rules.lat_max},
        {"theta_max", cfg.rh.rules.theta_max},
        {"v_margin_ref", cfg.rh.rules.v_margin_ref},
        {"collision_cap", cfg.rh.rules.collision_cap}}},
      {"hierarchy", {{"a", cfg.rh.hierarchy.a}, {"zeta", cfg.rh.hierarchy.zeta}}},
      {"tree",
       {{"lateral_offsets", cfg.rh.tree.lateral_offsets},
        {"terminal_speed_fractions", cfg.rh.tree.terminal_speed_fractions},
        {"w_theta", cfg.rh.tree.w_theta}}},
      {"fuser",
       {{"eta", cfg.fuser.eta},
        {"gamma", cfg.fuser.gamma},
        {"b0", json::array({cfg.fuser.b0.b_l, cfg.fuser.b0.b_r})},
        {"lambda", cfg.fuser.lambda}}},
      {"n", cfg.n},
      {"horizon", cfg.horizon},
      {"history", cfg.history},
      {"seed", cfg.seed},
      {"out", cfg.out},
      {"workers", cfg.workers},
  };
}

RunConfig run_config_from_json(const json& j) {
  json merged = to_json(RunConfig{});
  merge_strict(merged, j, "");
  return guarded([&] {
    RunConfig cfg;
    cfg.dataset = merged.at("dataset").get<std::string>();
    cfg.suite = suite_config_from_json(merged.at("suite"));
    const json& pred = merged.at("predictors");
    cfg.learned_predictor = pred.at("learned").get<std::string>();
    cfg.rule_predictor = pred.at("rule").get<std::string>();
    cfg.external_timeout = pred.at("external_timeout").get<double>();

    const json& sur = merged.at("surrogate");
    const auto weights = sur.at("mode_weights").get<std::vector<double>>();
    if (weights.size() != 4) throw ParseError("surrogate.mode_weights: expected 4 entries");
    std::copy(weights.begin(), weights.end(), cfg.surrogate.mode_weights.begin());
    cfg.surrogate.accel_noise_std = sur.at("accel_noise_std").get<double>();
    cfg.surrogate.yawrate_noise_std = sur.at("yawrate_noise_std").get<double>();
    cfg.surrogate.deceleration = sur.at("deceleration").get<double>();
    cfg.surrogate.turn_yaw_rate = sur.at("turn_yaw_rate").get<double>();

    const json& rules = merged.at("rules");
    cfg.rh.rules.d_safe = rules.at("d_safe").get<double>();
    cfg.rh.rules.lat_max = rules.at("lat_max").get<double>();
    cfg.rh.rules.theta_max = rules.at("theta_max").get<double>();
    cfg.rh.rules.v_margin_ref = rules.at("v_margin_ref").get<double>();
    cfg.rh.rules.collision_cap = rules.at("collision_cap").get<double>();
    cfg.rh.hierarchy.a = merged.at("hierarchy").at("a").get<double>();
    cfg.rh.hierarchy.zeta = merged.at("hierarchy").at("zeta").get<double>();
    const json& tree = merged.at("tree");
    cfg.rh.tree.lateral_offsets = tree.at("lateral_offsets").get<std::vector<double>>();
    cfg.rh.tree.terminal_speed_fractions = tree.at("terminal_speed_fractions").get<std::vector<double>>();
    cfg.rh.tree.w_theta = tree.at("w_theta").get<double>();

    const json& fuser = merged.at("fuser");
    cfg.fuser.eta = fuser.at("eta").get<double>();
    cfg.fuser.gamma = fuser.at("gamma").get<double>();
    const auto b0 = fuser.at("b0").get<std::vector<double>>();
    if (b0.size() != 2) throw ParseError("fuser.b0: expected 2 entries");
    cfg.fuser.b0 = Belief{b0[0], b0[1]};
    cfg.fuser.lambda = fuser.at("lambda").get<double>();

    cfg.n = merged.at("n").get<int>();
    cfg.horizon = merged.at("horizon").get<int>();
    cfg.history = merged.at("history").get<int>();
    cfg.seed = merged.at("seed").get<std::uint64_t>();
    cfg.out = merged.at("out").get<std::string>();
    cfg.workers = merged.at("workers").get<int>();
    cfg.rh.tree.horizon = cfg.horizon;
    cfg.rh.tree.dt = cfg.suite.base.dt;
    cfg.rh.hierarchy.n = 4;
    return cfg;
  });
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  try {
    return run_config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("n must be >= 1");
  if (cfg.horizon < 1) throw ValidationError("horizon must be >= 1");
  if (cfg.history < 0) throw ValidationError("history must be >= 0");
  if (cfg.workers < 1) throw ValidationError("workers must be >= 1");
  if (!(cfg.external_timeout > 0.0)) throw ValidationError("external_timeout must be positive");
  for (const auto* slot : {&cfg.learned_predictor, &cfg.rule_predictor})
    if (*slot != "surrogate" && *slot != "rh" && !slot->starts_with("external:"))
      throw ValidationError("unknown predictor '" + *slot + "' (expected surrogate, rh, or external:<command>)");
  validate(cfg.surrogate);
  validate(cfg.rh.rules);
  validate(cfg.rh.hierarchy);
  validate(cfg.rh.tree);
  validate(cfg.fuser);
  if (cfg.dataset.empty()) validate(cfg.suite.base, cfg.history + cfg.horizon + 1);
}

std::vector<std::string> dotted_keys(const json& j) {
  std::vector<std::string> out;
  collect_keys(j, "", out);
  return out;
}

void apply_override(json& doc, const std::string& dotted_key, const std::string& value) {
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object()) throw ParseError(dotted_key + ": not an object path");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_string()) {
    *node = value;
    return;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(value) : parsed;
}

}  // namespace mpf
