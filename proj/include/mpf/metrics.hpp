#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mpf/types.hpp"

namespace mpf {

// Displacement metrics over planar positions. `truth` holds the T ground
// truth states aligned with every sample.
double ade(const TrajectorySamples& samples, const Trajectory& truth);
double fde(const TrajectorySamples& samples, const Trajectory& truth);
double min_ade(const TrajectorySamples& samples, const Trajectory& truth);
double min_fde(const TrajectorySamples& samples, const Trajectory& truth);

struct SceneMetrics {
  std::string scene_id;
  std::string predictor;
  double ade{0.0};
  double fde{0.0};
  double min_ade{0.0};
  double min_fde{0.0};

  friend bool operator==(const SceneMetrics&, const SceneMetrics&) = default;
};

/// All four metrics in a single pass.
SceneMetrics scene_metrics(const TrajectorySamples& samples, const Trajectory& truth, std::string scene_id,
                           std::string predictor);

/// Mean of the ceil(level * M) largest values.
double cvar(std::span<const double> values, double level);

/// Mean percentage gap to the per-column minimum. rows = predictors,
/// columns = metrics; every value must be positive.
std::vector<double> mdb(const std::vector<std::vector<double>>& table);

enum MetricIndex : std::size_t { kAde = 0, kFde = 1, kMinAde = 2, kMinFde = 3 };
inline constexpr std::array<const char*, 4> kMetricNames{"ade", "fde", "min_ade", "min_fde"};

double metric_value(const SceneMetrics& m, std::size_t metric);

struct PredictorSummary {
  std::string predictor;
  std::size_t scenes{0};
  std::array<double, 4> mean{};
  std::array<double, 4> sem{};  // standard error of the mean
  std::array<double, 4> cvar{};
  double mdb{0.0};
};

/// Per-predictor means and CVaR of the four metrics; MDB across the 8 summary
/// values. Rows follow `predictor_order`.
struct MetricTable {
  std::vector<PredictorSummary> rows;
  double cvar_level{0.1};

  const PredictorSummary* find(const std::string& predictor) const;
};

MetricTable summarize(std::span<const SceneMetrics> records, const std::vector<std::string>& predictor_order,
                      double cvar_level = 0.1);

struct HistogramBin {
  double lo{0.0};
  double hi{0.0};
  std::size_t count{0};
};

/// Equal-width bins over [lo, hi]; the last bin is closed.
std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

}  // namespace mpf
