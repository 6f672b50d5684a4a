#include "mpf/hierarchy.hpp"

#include <algorithm>
#include <cmath>

#include "mpf/errors.hpp"

namespace mpf {

void validate(const HierarchyConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("rule hierarchy needs at least one rule");
  if (!(cfg.a > 2.0)) throw ValidationError("reward base must exceed 2");
  if (!(cfg.zeta > 0.0)) throw ValidationError("Boltzmann temperature must be positive");
}

int rank(const RobustnessVector& rho) {
  const auto n = static_cast<int>(rho.size());
  int r = 1;
  for (int i = 0; i < n; ++i)
    if (rho[i] < 0.0) r += 1 << (n - 1 - i);
  return r;
}

double reward(const RobustnessVector& rho, const HierarchyConfig& cfg) {
  const auto n = static_cast<int>(rho.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = std::clamp(rho[i], -1.0, 1.0);
    if (r >= 0.0) total += std::pow(cfg.a, n - i);
    total += r / n;
  }
  return total;
}

std::vector<double> boltzmann(std::span<const double> rewards, double zeta) {
  std::vector<double> p(rewards.size());
  if (rewards.empty()) return p;
  const double top = *std::max_element(rewards.begin(), rewards.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    p[i] = std::exp((rewards[i] - top) / zeta);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

BranchScores score_branches(std::span<const RobustnessVector> robustness, const HierarchyConfig& cfg) {
  BranchScores scores;
  scores.rewards.resize(robustness.size());
  std::transform(robustness.begin(), robustness.end(), scores.rewards.begin(),
                 [&](const RobustnessVector& rho) { return reward(rho, cfg); });
  scores.probabilities = boltzmann(scores.rewards, cfg.zeta);
  return scores;
}

}  // namespace mpf
