#include "mpf/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mpf/errors.hpp"

namespace mpf {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeFailure("write failed for " + path.string());
}

std::string metrics_csv(std::span<const SceneMetrics> records) {
  std::string out = "scene_id,predictor,ade,fde,min_ade,min_fde\n";
  for (const auto& r : records) {
    out += r.scene_id + ',' + r.predictor + ',' + format_double(r.ade) + ',' + format_double(r.fde) + ',' +
           format_double(r.min_ade) + ',' + format_double(r.min_fde) + '\n';
  }
  return out;
}

std::vector<SceneMetrics> parse_metrics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "scene_id,predictor,ade,fde,min_ade,min_fde")
    throw ParseError("metrics csv: unexpected header");
  std::vector<SceneMetrics> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw ParseError("metrics csv line " + std::to_string(lineno) + ": expected 6 fields");
    SceneMetrics m{cells[0], cells[1]};
    double* fields[4] = {&m.ade, &m.fde, &m.min_ade, &m.min_fde};
    for (int k = 0; k < 4; ++k) {
      try {
        std::size_t used = 0;
        *fields[k] = std::stod(cells[2 + k], &used);
        if (used != cells[2 + k].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ParseError("metrics csv line " + std::to_string(lineno) + ": bad number '" + cells[2 + k] + "'");
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

json summary_json(const MetricTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json mean, sem, cv;
    for (std::size_t k = 0; k < 4; ++k) {
      mean[kMetricNames[k]] = row.mean[k];
      sem[kMetricNames[k]] = row.sem[k];
      cv[kMetricNames[k]] = row.cvar[k];
    }
    rows.push_back(
        {{"predictor", row.predictor}, {"scenes", row.scenes}, {"mean", mean}, {"sem", sem}, {"cvar", cv}, {"mdb", row.mdb}});
  }
  return json{{"cvar_level", table.cvar_level}, {"predictors", rows}};
}

std::string scatter_csv(std::span<const SceneMetrics> records, const std::string& learned, const std::string& rule) {
  std::string out = "scene_id,ade_" + learned + ",ade_" + rule + "\n";
  // Records come grouped per scene, so a pending learned value pairs with
  // the next rule value of the same scene.
  const SceneMetrics* pending = nullptr;
  for (const auto& r : records) {
    if (r.predictor == learned) {
      pending = &r;
    } else if (r.predictor == rule && pending && pending->scene_id == r.scene_id) {
      out += r.scene_id + ',' + format_double(pending->ade) + ',' + format_double(r.ade) + '\n';
      pending = nullptr;
    }
  }
  return out;
}

std::string histograms_csv(std::span<const SceneMetrics> records, const std::vector<std::string>& predictors,
                           std::size_t bins) {
  std::string out = "predictor,metric,bin,lo,hi,count\n";
  for (std::size_t k = 0; k < 4; ++k) {
    double hi = 0.0;
    for (const auto& r : records) hi = std::max(hi, metric_value(r, k));
    for (const auto& p : predictors) {
      std::vector<double> values;
      for (const auto& r : records)
        if (r.predictor == p) values.push_back(metric_value(r, k));
      const auto hist = histogram(values, bins, 0.0, hi);
      for (std::size_t b = 0; b < hist.size(); ++b) {
        out += p + ',' + kMetricNames[k] + ',' + std::to_string(b) + ',' + format_double(hist[b].lo) + ',' +
               format_double(hist[b].hi) + ',' + std::to_string(hist[b].count) + '\n';
      }
    }
  }
  return out;
}

std::string belief_trace_jsonl(std::span<const BeliefTracePoint> trace) {
  std::string out;
  for (const auto& p : trace) {
    json j{{"episode_id", p.episode_id}, {"t", p.t}, {"b_l", p.b_l}, {"b_r", p.b_r}};
    j["alpha"] = p.alpha ? json(*p.alpha) : json(nullptr);
    out += j.dump() + '\n';
  }
  return out;
}

std::vector<BeliefTracePoint> parse_belief_trace(const std::string& text) {
  std::vector<BeliefTracePoint> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      BeliefTracePoint p;
      p.episode_id = j.at("episode_id").get<std::string>();
      p.t = j.at("t").get<int>();
      p.b_l = j.at("b_l").get<double>();
      p.b_r = j.at("b_r").get<double>();
      if (!j.at("alpha").is_null()) p.alpha = j.at("alpha").get<double>();
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ParseError("belief trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

json timing_json(const Timing& t) {
  auto per_call_ms = [](double s, std::size_t n) { return n ? s * 1000.0 / static_cast<double>(n) : 0.0; };
  return json{{"wall_s", t.wall_s},
              {"learned", {{"total_s", t.learned_s}, {"calls", t.learned_calls}, {"ms_per_scene", per_call_ms(t.learned_s, t.learned_calls)}}},
              {"rule", {{"total_s", t.rule_s}, {"calls", t.rule_calls}, {"ms_per_scene", per_call_ms(t.rule_s, t.rule_calls)}}},
              {"fuser", {{"total_s", t.fuser_s}, {"updates", t.fuser_updates}, {"ms_per_update", per_call_ms(t.fuser_s, t.fuser_updates)}}}};
}

std::vector<std::string> predictor_order(std::span<const SceneMetrics> records) {
  std::vector<std::string> order;
  for (const auto& r : records)
    if (std::find(order.begin(), order.end(), r.predictor) == order.end()) order.push_back(r.predictor);
  return order;
}

void write_report(const std::filesystem::path& dir, std::span<const SceneMetrics> records,
                  std::span<const BeliefTracePoint> trace) {
  if (records.empty()) throw ValidationError("no scenes to report");
  const auto order = predictor_order(records);
  const MetricTable table = summarize(records, order);
  std::vector<std::string> standalone;
  for (const auto& p : order)
    if (p != kFusedLabel) standalone.push_back(p);

  // Render everything first so a failure leaves no partial output behind.
  const std::string metrics = metrics_csv(records);
  const std::string summary = summary_json(table).dump(2) + "\n";
  const std::string scatter =
      standalone.size() >= 2 ? scatter_csv(records, standalone[0], standalone[1]) : std::string("scene_id\n");
  const std::string hist = histograms_csv(records, order);
  const std::string beliefs = belief_trace_jsonl(trace);

  std::filesystem::create_directories(dir);
  write_file(dir / kMetricsCsv, metrics);
  write_file(dir / kSummaryJson, summary);
  write_file(dir / kScatterCsv, scatter);
  write_file(dir / kHistogramsCsv, hist);
  write_file(dir / kBeliefTrace, beliefs);
}

void write_run(const std::filesystem::path& dir, const RunReport& report) {
  write_report(dir, report.records, report.belief_trace);
  json info{{"episodes", report.episodes},
            {"failed_episodes", report.failed_episodes},
            {"scenes", report.scenes},
            {"predictors", report.predictor_order},
            {"failures", report.failures}};
  write_file(dir / kRunJson, info.dump(2) + "\n");
  write_file(dir / kTimingJson, timing_json(report.timing).dump(2) + "\n");
}

void report_from_dir(const std::filesystem::path& run_dir, const std::filesystem::path& out) {
  const auto records = parse_metrics_csv(read_file(run_dir / kMetricsCsv));
  std::vector<BeliefTracePoint> trace;
  if (std::filesystem::exists(run_dir / kBeliefTrace)) trace = parse_belief_trace(read_file(run_dir / kBeliefTrace));
  write_report(out, records, trace);
}

std::string sweep_csv(const SweepReport& sweep) {
  std::string out = "group";
  for (double eta : sweep.etas) out += ",eta=" + format_double(eta);
  out += '\n';
  for (std::size_t g = 0; g < sweep.groups.size(); ++g) {
    out += sweep.groups[g];
    for (double v : sweep.mdb[g]) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

json sweep_json(const SweepReport& sweep) {
  json rows = json::array();
  for (std::size_t g = 0; g < sweep.groups.size(); ++g) rows.push_back({{"group", sweep.groups[g]}, {"mdb", sweep.mdb[g]}});
  return json{{"etas", sweep.etas}, {"predictor", kFusedLabel}, {"rows", rows}};
}

}  // namespace mpf
