#pragma once

#include <vector>

#include "mpf/hierarchy.hpp"
#include "mpf/predictor.hpp"
#include "mpf/rules.hpp"
#include "mpf/tree.hpp"

namespace mpf {

struct RhConfig {
  RuleParams rules;
  HierarchyConfig hierarchy;
  TreeConfig tree;
};

/// Scored trajectory tree for one scene.
struct RhEvaluation {
  const Lane* lane{nullptr};
  std::vector<Trajectory> branches;
  std::vector<RobustnessVector> robustness;
  BranchScores scores;
};

/// Rule-hierarchy predictor: lane selection, spline tree, rule robustness,
/// rank-preserving reward, Boltzmann distribution, then n draws with
/// replacement.
class RhPredictor final : public Predictor {
 public:
  explicit RhPredictor(RhConfig cfg = {});

  std::string name() const override { return "rh"; }
  TrajectorySamples sample(const PredictionScene& scene, int n, int horizon, std::uint64_t seed) const override;

  RhEvaluation evaluate(const PredictionScene& scene, int horizon) const;
  const RhConfig& config() const { return cfg_; }

 private:
  RhConfig cfg_;
};

/// Index drawn by inverse CDF from one uniform in [0, 1).
std::size_t draw_categorical(std::span<const double> probabilities, double u);

}  // namespace mpf
