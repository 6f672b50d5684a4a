#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "mpf/types.hpp"

namespace mpf {

/// Two-model belief: mass on the learned predictor (b_l) and on the
/// rule-based predictor (b_r).
struct Belief {
  double b_l{0.5};
  double b_r{0.5};

  friend bool operator==(const Belief&, const Belief&) = default;
};

void validate(const Belief& b);

struct FuserConfig {
  double eta{0.1};     // learning rate, (0, 1]
  double gamma{0.02};  // switching probability; 0 disables mixing, 1 pins the prior
  Belief b0{0.5, 0.5};
  double lambda{1.0};  // 1/m, sharpness of the performance metric
};

void validate(const FuserConfig& cfg);

/// exp(-lambda * min_i |pred_i - observed|) over planar positions.
double perf_metric(std::span<const AgentState> one_step_preds, const AgentState& observed, double lambda);

/// alpha = (gamma_l * b_l) / (gamma_r * b_r).
double likelihood_ratio(double gamma_l, double gamma_r, const Belief& b);

/// Tempered update followed by mixing with the prior:
///   b' = (1 - gamma) [a / (1 + a), 1 / (1 + a)] + gamma b0,  a = alpha^eta.
/// Throws ValidationError for non-finite or non-positive alpha.
Belief belief_update(const Belief& b, double alpha, const FuserConfig& cfg);

/// N independent Bernoulli(b_l) draws; returns (N_l, N_r).
std::pair<int, int> belief_sample_counts(const Belief& b, int n, std::uint64_t seed);

/// First n_l samples of `learned` followed by the first n_r of `rule`.
TrajectorySamples fuse(const TrajectorySamples& learned, const TrajectorySamples& rule, int n_l, int n_r);

/// Stateful wrapper over one episode: holds the belief and the one-step
/// predictions stored at the previous scene.
class EpisodeFuser {
 public:
  explicit EpisodeFuser(FuserConfig cfg);

  /// Forget history and return to b0.
  void reset();

  /// Consume the observed current state against the stored one-step
  /// predictions. Returns alpha, or nothing when no history is stored yet.
  std::optional<double> observe(const AgentState& current);

  /// Store the first predicted state of every sample for the next update.
  void remember(const TrajectorySamples& learned, const TrajectorySamples& rule);

  const Belief& belief() const { return belief_; }
  const FuserConfig& config() const { return cfg_; }

 private:
  FuserConfig cfg_;
  Belief belief_;
  std::vector<AgentState> learned_history_;
  std::vector<AgentState> rule_history_;
};

}  // namespace mpf
