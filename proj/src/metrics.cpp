#include "mpf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "mpf/errors.hpp"

namespace mpf {

namespace {

void check_shapes(const TrajectorySamples& samples, const Trajectory& truth) {
  if (samples.samples.empty()) throw ValidationError("metrics need at least one sample");
  if (truth.states.empty()) throw ValidationError("metrics need a non-empty ground truth");
  for (const auto& s : samples.samples)
    if (s.states.size() != truth.states.size())
      throw ValidationError("sample length " + std::to_string(s.states.size()) + " differs from ground truth length " +
                            std::to_string(truth.states.size()));
}

double mean_error(const Trajectory& pred, const Trajectory& truth) {
  double sum = 0.0;
  for (std::size_t k = 0; k < truth.states.size(); ++k)
    sum += distance(pred.states[k].position(), truth.states[k].position());
  return sum / static_cast<double>(truth.states.size());
}

double final_error(const Trajectory& pred, const Trajectory& truth) {
  return distance(pred.states.back().position(), truth.states.back().position());
}

}  // namespace

double ade(const TrajectorySamples& samples, const Trajectory& truth) {
  return scene_metrics(samples, truth, {}, {}).ade;
}
double fde(const TrajectorySamples& samples, const Trajectory& truth) {
  return scene_metrics(samples, truth, {}, {}).fde;
}
double min_ade(const TrajectorySamples& samples, const Trajectory& truth) {
  return scene_metrics(samples, truth, {}, {}).min_ade;
}
double min_fde(const TrajectorySamples& samples, const Trajectory& truth) {
  return scene_metrics(samples, truth, {}, {}).min_fde;
}

SceneMetrics scene_metrics(const TrajectorySamples& samples, const Trajectory& truth, std::string scene_id,
                           std::string predictor) {
  check_shapes(samples, truth);
  SceneMetrics m;
  m.scene_id = std::move(scene_id);
  m.predictor = std::move(predictor);
  m.min_ade = std::numeric_limits<double>::infinity();
  m.min_fde = std::numeric_limits<double>::infinity();
  for (const auto& pred : samples.samples) {
    const double e = mean_error(pred, truth);
    const double f = final_error(pred, truth);
    m.ade += e;
    m.fde += f;
    m.min_ade = std::min(m.min_ade, e);
    m.min_fde = std::min(m.min_fde, f);
  }
  const auto n = static_cast<double>(samples.samples.size());
  m.ade /= n;
  m.fde /= n;
  return m;
}

double cvar(std::span<const double> values, double level) {
  if (values.empty()) throw ValidationError("cvar of an empty set");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("cvar level must lie in (0, 1)");
  // The epsilon keeps 0.1 * 30 from rounding up to a tail of 4.
  const auto m = values.size();
  auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(m) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, m);
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end(),
                   std::greater<>());
  std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), std::greater<>());
  return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
         static_cast<double>(k);
}

std::vector<double> mdb(const std::vector<std::vector<double>>& table) {
  if (table.empty()) return {};
  const std::size_t cols = table.front().size();
  if (cols == 0) throw ValidationError("mdb needs at least one metric");
  std::vector<double> best(cols, std::numeric_limits<double>::infinity());
  for (const auto& row : table) {
    if (row.size() != cols) throw ValidationError("mdb rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) best[j] = std::min(best[j], row[j]);
  }
  for (double b : best)
    if (!(b > 0.0)) throw ValidationError("mdb needs strictly positive metric values");
  std::vector<double> out;
  out.reserve(table.size());
  for (const auto& row : table) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += (row[j] - best[j]) / best[j];
    out.push_back(sum / static_cast<double>(cols) * 100.0);
  }
  return out;
}

double metric_value(const SceneMetrics& m, std::size_t metric) {
  switch (metric) {
    case kAde: return m.ade;
    case kFde: return m.fde;
    case kMinAde: return m.min_ade;
    case kMinFde: return m.min_fde;
  }
  throw ValidationError("unknown metric index");
}

const PredictorSummary* MetricTable::find(const std::string& predictor) const {
  for (const auto& row : rows)
    if (row.predictor == predictor) return &row;
  return nullptr;
}

MetricTable summarize(std::span<const SceneMetrics> records, const std::vector<std::string>& predictor_order,
                      double cvar_level) {
  MetricTable table;
  table.cvar_level = cvar_level;
  for (const auto& predictor : predictor_order) {
    PredictorSummary row;
    row.predictor = predictor;
    for (std::size_t metric = 0; metric < 4; ++metric) {
      std::vector<double> values;
      for (const auto& r : records)
        if (r.predictor == predictor) values.push_back(metric_value(r, metric));
      if (values.empty()) throw ValidationError("no scenes recorded for predictor '" + predictor + "'");
      const double n = static_cast<double>(values.size());
      const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      row.scenes = values.size();
      row.mean[metric] = mean;
      row.sem[metric] = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      row.cvar[metric] = cvar(values, cvar_level);
    }
    table.rows.push_back(row);
  }
  std::vector<std::vector<double>> matrix;
  for (const auto& row : table.rows) {
    std::vector<double> v(row.mean.begin(), row.mean.end());
    v.insert(v.end(), row.cvar.begin(), row.cvar.end());
    matrix.push_back(std::move(v));
  }
  const std::vector<double> gaps = mdb(matrix);
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].mdb = gaps[i];
  return table;
}

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  if (!(hi > lo)) hi = lo + 1.0;
  std::vector<HistogramBin> out(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i].lo = lo + width * static_cast<double>(i);
    out[i].hi = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
  }
  for (double v : values) {
    if (v < lo || v > hi) continue;
    auto i = static_cast<std::size_t>((v - lo) / width);
    if (i >= bins) i = bins - 1;
    ++out[i].count;
  }
  return out;
}

}  // namespace mpf
