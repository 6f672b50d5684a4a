#pragma once

#include <span>
#include <vector>

#include "mpf/rules.hpp"

namespace mpf {

struct HierarchyConfig {
  int n{4};          // number of rules
  double a{4.0};     // reward base, > 2
  double zeta{1.0};  // Boltzmann temperature, > 0
};

void validate(const HierarchyConfig& cfg);

struct BranchScores {
  std::vector<double> rewards;
  std::vector<double> probabilities;
};

/// 1 + sum_i violated_i * 2^(n-i), violated meaning rho_i < 0. Rank 1 is best.
int rank(const RobustnessVector& rho);

/// Rank-preserving reward: sum_i a^(n-i+1) step(rho_i) + rho_i / n, with
/// step(0) = 1 and every rho_i clamped to [-1, 1] first so the linear
/// tie-breaker can never bridge two ranks.
double reward(const RobustnessVector& rho, const HierarchyConfig& cfg);

/// Softmax of rewards / zeta, evaluated with max subtraction.
std::vector<double> boltzmann(std::span<const double> rewards, double zeta);

/// Rewards and Boltzmann probabilities for a set of branches.
BranchScores score_branches(std::span<const RobustnessVector> robustness, const HierarchyConfig& cfg);

}  // namespace mpf
