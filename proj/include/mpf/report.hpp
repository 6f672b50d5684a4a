#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpf/harness.hpp"

namespace mpf {

// Output files of a run directory.
inline constexpr const char* kMetricsCsv = "metrics.csv";
inline constexpr const char* kSummaryJson = "summary.json";
inline constexpr const char* kScatterCsv = "scatter.csv";
inline constexpr const char* kHistogramsCsv = "histograms.csv";
inline constexpr const char* kBeliefTrace = "belief_trace.jsonl";
inline constexpr const char* kRunJson = "run.json";
inline constexpr const char* kTimingJson = "timing.json";

std::string format_double(double v);  // shortest text that reads back to the same double

std::string metrics_csv(std::span<const SceneMetrics> records);
std::vector<SceneMetrics> parse_metrics_csv(const std::string& text);

nlohmann::json summary_json(const MetricTable& table);

/// Paired per-scene ADE of the two standalone predictors.
std::string scatter_csv(std::span<const SceneMetrics> records, const std::string& learned, const std::string& rule);

/// Per predictor and metric, `bins` equal-width bins over [0, max] of that
/// metric across all predictors.
std::string histograms_csv(std::span<const SceneMetrics> records, const std::vector<std::string>& predictors,
                           std::size_t bins = 20);

std::string belief_trace_jsonl(std::span<const BeliefTracePoint> trace);
std::vector<BeliefTracePoint> parse_belief_trace(const std::string& text);

nlohmann::json timing_json(const Timing& timing);

/// Predictors in order of first appearance.
std::vector<std::string> predictor_order(std::span<const SceneMetrics> records);

/// Summary, scatter, and histogram files derived purely from the per-scene
/// records and belief trace. Throws ValidationError before writing anything
/// when there are no records.
void write_report(const std::filesystem::path& dir, std::span<const SceneMetrics> records,
                  std::span<const BeliefTracePoint> trace);

/// write_report plus run.json (episode and failure counts) and timing.json.
void write_run(const std::filesystem::path& dir, const RunReport& report);

/// Rebuild the report files of `out` from `run_dir`'s metrics.csv and
/// belief trace.
void report_from_dir(const std::filesystem::path& run_dir, const std::filesystem::path& out);

/// Table with one row per group and one "eta=<v>" column per sweep value.
std::string sweep_csv(const SweepReport& sweep);
nlohmann::json sweep_json(const SweepReport& sweep);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mpf
