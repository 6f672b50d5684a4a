#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mpf/config.hpp"
#include "mpf/dataset.hpp"
#include "mpf/metrics.hpp"
#include "mpf/predictor.hpp"

namespace mpf {

inline constexpr const char* kFusedLabel = "mpf";

/// Belief used to fuse at step t, plus the likelihood ratio that produced it
/// (absent at the first scene of an episode).
struct BeliefTracePoint {
  std::string episode_id;
  int t{0};
  double b_l{0.5};
  double b_r{0.5};
  std::optional<double> alpha;

  friend bool operator==(const BeliefTracePoint&, const BeliefTracePoint&) = default;
};

/// Hash over the exact bits of one predictor's samples for one scene.
struct SampleDigest {
  std::string scene_id;
  std::string predictor;
  std::uint64_t hash{0};

  friend bool operator==(const SampleDigest&, const SampleDigest&) = default;
};

/// Wall-clock totals in seconds. Not deterministic, kept apart from metrics.
struct Timing {
  double learned_s{0.0};
  double rule_s{0.0};
  double fuser_s{0.0};
  double wall_s{0.0};
  std::size_t learned_calls{0};
  std::size_t rule_calls{0};
  std::size_t fuser_updates{0};
};

struct RunReport {
  std::vector<std::string> predictor_order;  // learned label, rule label, "mpf"
  std::vector<SceneMetrics> records;         // per scene: learned, rule, fused
  std::vector<BeliefTracePoint> belief_trace;
  std::vector<SampleDigest> digests;  // standalone predictors only
  MetricTable table;
  std::size_t episodes{0};
  std::size_t failed_episodes{0};
  std::size_t scenes{0};
  std::vector<std::string> failures;  // "<episode id>: <message>"
  Timing timing;
};

/// "<episode id>@<t>"
std::string scene_id(const std::string& episode_id, int t);

/// Predictor for a slot spec: "surrogate", "rh", or "external:<command>".
std::unique_ptr<Predictor> make_predictor(const std::string& spec, const RunConfig& cfg, const std::string& label);

/// Labels for the two slots; suffixed with the slot name when they collide.
std::pair<std::string, std::string> predictor_labels(const RunConfig& cfg);

/// Dataset named by cfg.dataset, or the configured suite generated in memory.
Dataset resolve_dataset(const RunConfig& cfg);

/// Multi-predictor fusion over every episode of the dataset. Episodes run on
/// cfg.workers threads; results are merged in dataset order, so everything
/// but `timing` is independent of the worker count.
RunReport run(const RunConfig& cfg, const Dataset& data);
RunReport run(const RunConfig& cfg);

struct SweepReport {
  std::vector<double> etas;
  std::vector<std::string> groups;      // "all" first, then scenario groups in sorted order
  std::vector<std::vector<double>> mdb;  // [group][eta], fused predictor
  std::vector<RunReport> runs;           // one per eta
};

/// One run per eta with everything else shared, so the standalone samples
/// are identical across columns.
SweepReport sweep_eta(const RunConfig& cfg, const Dataset& data, const std::vector<double>& etas);

/// Fused-predictor MDB restricted to one scenario group ("all" for every scene).
double group_mdb(const RunReport& report, const std::string& group);

}  // namespace mpf
