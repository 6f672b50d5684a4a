#include "mpf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <set>
#include <thread>

#include "mpf/errors.hpp"
#include "mpf/external_adapter.hpp"
#include "mpf/fuser.hpp"
#include "mpf/kinematic_surrogate.hpp"
#include "mpf/rh_predictor.hpp"
#include "mpf/scenarios.hpp"
#include "mpf/seeding.hpp"

namespace mpf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t digest(const TrajectorySamples& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& traj : s.samples) {
    for (const auto& st : traj.states) {
      const double v[4] = {st.x, st.y, st.heading, st.speed};
      feed(v, sizeof v);
      feed(&st.t, sizeof st.t);
    }
  }
  return h;
}

struct EpisodeResult {
  bool failed{false};
  std::string error;
  std::vector<SceneMetrics> records;
  std::vector<BeliefTracePoint> trace;
  std::vector<SampleDigest> digests;
  Timing timing;
};

struct Slots {
  const Predictor& learned;
  const Predictor& rule;
  std::string learned_label;
  std::string rule_label;
};

EpisodeResult run_episode(const RunConfig& cfg, const Dataset& data, const Episode& episode, const Slots& slots) {
  EpisodeResult out;
  const auto scenes = extract_scenes(episode, data.map, cfg.history, cfg.horizon);
  EpisodeFuser fuser(cfg.fuser);
  fuser.reset();
  for (const auto& scene : scenes) {
    const std::string id = scene_id(episode.id, scene.t);

    auto start = Clock::now();
    const std::optional<double> alpha = fuser.observe(scene.target_state());
    if (alpha) {
      out.timing.fuser_s += seconds_since(start);
      ++out.timing.fuser_updates;
    }
    const Belief belief = fuser.belief();

    start = Clock::now();
    TrajectorySamples learned = slots.learned.sample(
        scene, cfg.n, cfg.horizon, derive_seed(cfg.seed, episode.id, scene.t, slots.learned_label));
    out.timing.learned_s += seconds_since(start);
    ++out.timing.learned_calls;
    validate(learned, scene.t, cfg.horizon, scene.dt);

    start = Clock::now();
    TrajectorySamples rule =
        slots.rule.sample(scene, cfg.n, cfg.horizon, derive_seed(cfg.seed, episode.id, scene.t, slots.rule_label));
    out.timing.rule_s += seconds_since(start);
    ++out.timing.rule_calls;
    validate(rule, scene.t, cfg.horizon, scene.dt);

    fuser.remember(learned, rule);
    const auto [n_l, n_r] =
        belief_sample_counts(belief, cfg.n, derive_seed(cfg.seed, episode.id, scene.t, kFusedLabel));
    TrajectorySamples fused = fuse(learned, rule, n_l, n_r);
    fused.source_label = kFusedLabel;

    const Trajectory truth = future_truth(episode, scene.t, cfg.horizon);
    out.records.push_back(scene_metrics(learned, truth, id, slots.learned_label));
    out.records.push_back(scene_metrics(rule, truth, id, slots.rule_label));
    out.records.push_back(scene_metrics(fused, truth, id, kFusedLabel));
    out.trace.push_back({episode.id, scene.t, belief.b_l, belief.b_r, alpha});
    out.digests.push_back({id, slots.learned_label, digest(learned)});
    out.digests.push_back({id, slots.rule_label, digest(rule)});
  }
  return out;
}

template <typename T>
void append(std::vector<T>& dst, std::vector<T>&& src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

}  // namespace

std::string scene_id(const std::string& episode_id, int t) { return episode_id + "@" + std::to_string(t); }

std::unique_ptr<Predictor> make_predictor(const std::string& spec, const RunConfig& cfg, const std::string& label) {
  if (spec == "surrogate") return std::make_unique<KinematicSurrogate>(cfg.surrogate);
  if (spec == "rh") return std::make_unique<RhPredictor>(cfg.rh);
  if (spec.starts_with("external:")) {
    ExternalAdapter::Options opts;
    opts.command = spec.substr(std::strlen("external:"));
    opts.timeout = std::chrono::milliseconds(static_cast<long long>(cfg.external_timeout * 1000.0));
    opts.label = label;
    if (opts.command.empty()) throw ValidationError("external predictor needs a command");
    return std::make_unique<ExternalAdapter>(std::move(opts));
  }
  throw ValidationError("unknown predictor '" + spec + "'");
}

std::pair<std::string, std::string> predictor_labels(const RunConfig& cfg) {
  auto base = [](const std::string& spec) { return spec.starts_with("external:") ? std::string("external") : spec; };
  std::string learned = base(cfg.learned_predictor);
  std::string rule = base(cfg.rule_predictor);
  if (learned == rule) {
    learned += "_learned";
    rule += "_rule";
  }
  return {learned, rule};
}

Dataset resolve_dataset(const RunConfig& cfg) {
  if (!cfg.dataset.empty()) return load_dataset(cfg.dataset);
  return generate_suite(cfg.suite);
}

RunReport run(const RunConfig& cfg) {
  validate(cfg);
  return run(cfg, resolve_dataset(cfg));
}

RunReport run(const RunConfig& cfg, const Dataset& data) {
  validate(cfg);
  const auto wall_start = Clock::now();
  const auto [learned_label, rule_label] = predictor_labels(cfg);
  const auto learned = make_predictor(cfg.learned_predictor, cfg, learned_label);
  const auto rule = make_predictor(cfg.rule_predictor, cfg, rule_label);
  const Slots slots{*learned, *rule, learned_label, rule_label};

  std::vector<EpisodeResult> results(data.episodes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < data.episodes.size(); i = next++) {
      try {
        results[i] = run_episode(cfg, data, data.episodes[i], slots);
      } catch (const std::exception& e) {
        results[i] = EpisodeResult{};
        results[i].failed = true;
        results[i].error = e.what();
      }
    }
  };
  const int threads = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(data.episodes.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  RunReport report;
  report.predictor_order = {learned_label, rule_label, kFusedLabel};
  report.episodes = data.episodes.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    if (r.failed) {
      ++report.failed_episodes;
      report.failures.push_back(data.episodes[i].id + ": " + r.error);
      continue;
    }
    report.scenes += r.trace.size();
    append(report.records, std::move(r.records));
    append(report.belief_trace, std::move(r.trace));
    append(report.digests, std::move(r.digests));
    report.timing.learned_s += r.timing.learned_s;
    report.timing.rule_s += r.timing.rule_s;
    report.timing.fuser_s += r.timing.fuser_s;
    report.timing.learned_calls += r.timing.learned_calls;
    report.timing.rule_calls += r.timing.rule_calls;
    report.timing.fuser_updates += r.timing.fuser_updates;
  }
  if (!report.records.empty()) report.table = summarize(report.records, report.predictor_order);
  report.timing.wall_s = seconds_since(wall_start);
  return report;
}

double group_mdb(const RunReport& report, const std::string& group) {
  std::vector<SceneMetrics> subset;
  for (const auto& r : report.records) {
    const std::string episode = r.scene_id.substr(0, r.scene_id.rfind('@'));
    if (group == "all" || scenario_group(episode) == group) subset.push_back(r);
  }
  if (subset.empty()) throw ValidationError("no scenes in group '" + group + "'");
  const MetricTable table = summarize(subset, report.predictor_order);
  return table.find(kFusedLabel)->mdb;
}

SweepReport sweep_eta(const RunConfig& cfg, const Dataset& data, const std::vector<double>& etas) {
  if (etas.empty()) throw ValidationError("sweep needs at least one eta");
  SweepReport sweep;
  sweep.etas = etas;
  std::set<std::string> groups;
  for (const auto& ep : data.episodes) groups.insert(scenario_group(ep.id));
  sweep.groups.push_back("all");
  sweep.groups.insert(sweep.groups.end(), groups.begin(), groups.end());
  sweep.mdb.assign(sweep.groups.size(), std::vector<double>(etas.size(), 0.0));

  for (std::size_t j = 0; j < etas.size(); ++j) {
    RunConfig c = cfg;
    c.fuser.eta = etas[j];
    sweep.runs.push_back(run(c, data));
    const RunReport& r = sweep.runs.back();
    if (r.records.empty()) throw RuntimeFailure("sweep run at eta " + std::to_string(etas[j]) + " produced no scenes");
    for (std::size_t g = 0; g < sweep.groups.size(); ++g) sweep.mdb[g][j] = group_mdb(r, sweep.groups[g]);
  }
  return sweep;
}

}  // namespace mpf
