#pragma once

#include <cstdint>
#include <string>

#include "mpf/types.hpp"

namespace mpf {

/// Uniform sampling contract shared by every predictor. Output must be a
/// deterministic function of (scene, n, horizon, seed), and the n samples
/// are i.i.d. draws from the predictor's distribution. Implementations must
/// tolerate concurrent calls on one instance.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::string name() const = 0;
  virtual TrajectorySamples sample(const PredictionScene& scene, int n, int horizon, std::uint64_t seed) const = 0;
};

}  // namespace mpf
