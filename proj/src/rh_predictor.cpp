#include "mpf/rh_predictor.hpp"

#include "mpf/errors.hpp"
#include "mpf/seeding.hpp"

namespace mpf {

RhPredictor::RhPredictor(RhConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_.rules);
  validate(cfg_.hierarchy);
  validate(cfg_.tree);
}

std::size_t draw_categorical(std::span<const double> probabilities, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left the total a hair under 1; fall back to the last non-zero bin.
  for (std::size_t i = probabilities.size(); i-- > 0;)
    if (probabilities[i] > 0.0) return i;
  return probabilities.size() - 1;
}

RhEvaluation RhPredictor::evaluate(const PredictionScene& scene, int horizon) const {
  if (!scene.map || scene.map->lanes.empty()) throw RuntimeFailure("rule-hierarchy predictor needs a map with lanes");
  const AgentState& current = scene.target_state();

  TreeConfig tree_cfg = cfg_.tree;
  tree_cfg.horizon = horizon;
  tree_cfg.dt = scene.dt;

  RhEvaluation eval;
  eval.lane = &select_lane(current, *scene.map, tree_cfg.w_theta);
  eval.branches = build_tree(current, *eval.lane, tree_cfg);
  const std::vector<Trajectory> others = extrapolate_others(scene, horizon);
  eval.robustness.reserve(eval.branches.size());
  for (const auto& branch : eval.branches)
    eval.robustness.push_back(robustness_vector(branch, others, *eval.lane, cfg_.rules));
  eval.scores = score_branches(eval.robustness, cfg_.hierarchy);
  return eval;
}

TrajectorySamples RhPredictor::sample(const PredictionScene& scene, int n, int horizon, std::uint64_t seed) const {
  const RhEvaluation eval = evaluate(scene, horizon);
  Rng rng(seed);
  TrajectorySamples out;
  out.source_label = name();
  out.samples.reserve(n);
  for (int i = 0; i < n; ++i) out.samples.push_back(eval.branches[draw_categorical(eval.scores.probabilities, uniform01(rng))]);
  return out;
}

}  // namespace mpf
