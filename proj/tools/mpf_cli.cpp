#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpf/config.hpp"
#include "mpf/errors.hpp"
#include "mpf/harness.hpp"
#include "mpf/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2 };

// Short flag -> config key.
const std::vector<std::pair<std::string, std::string>> kAliases{
    {"dataset", "dataset"},   {"n", "n"},           {"horizon", "horizon"},     {"history", "history"},
    {"eta", "fuser.eta"},     {"gamma", "fuser.gamma"}, {"lambda", "fuser.lambda"}, {"zeta", "hierarchy.zeta"},
    {"reward-base", "hierarchy.a"}, {"seed", "seed"}, {"out", "out"},          {"workers", "workers"},
};

struct ConfigOptions {
  std::string config_file;
  std::string suite_file;
  std::string predictors;
  std::map<std::string, std::string> values;  // config key -> raw value
};

void add_config_options(CLI::App& cmd, ConfigOptions& opts) {
  cmd.add_option("--config", opts.config_file, "JSON run configuration")->check(CLI::ExistingFile);
  cmd.add_option("--suite", opts.suite_file, "JSON scenario suite configuration")->check(CLI::ExistingFile);
  cmd.add_option("--predictors", opts.predictors, "learned,rule slots: surrogate | rh | external:<command>");
  std::set<std::string> covered;
  for (const auto& [flag, key] : kAliases) {
    cmd.add_option_function<std::string>("--" + flag, [&opts, key = key](const std::string& v) { opts.values[key] = v; },
                                         "sets " + key);
    covered.insert(key);
  }
  for (const auto& key : mpf::dotted_keys(mpf::to_json(mpf::RunConfig{}))) {
    if (covered.count(key)) continue;
    cmd.add_option_function<std::string>("--" + key, [&opts, key](const std::string& v) { opts.values[key] = v; })
        ->group("Config keys");
  }
}

mpf::RunConfig build_config(const ConfigOptions& opts) {
  json doc = mpf::to_json(mpf::RunConfig{});
  if (!opts.config_file.empty()) doc = mpf::to_json(mpf::load_run_config(opts.config_file));
  if (!opts.suite_file.empty()) {
    json suite;
    try {
      suite = json::parse(mpf::read_file(opts.suite_file));
    } catch (const json::parse_error& e) {
      throw mpf::ParseError(opts.suite_file + ": " + e.what());
    }
    doc["suite"] = mpf::to_json(mpf::suite_config_from_json(suite));
  }
  if (!opts.predictors.empty()) {
    const auto comma = opts.predictors.find(',');
    if (comma == std::string::npos) throw mpf::ValidationError("--predictors expects learned,rule");
    doc["predictors"]["learned"] = opts.predictors.substr(0, comma);
    doc["predictors"]["rule"] = opts.predictors.substr(comma + 1);
  }
  for (const auto& [key, value] : opts.values) mpf::apply_override(doc, key, value);
  mpf::RunConfig cfg = mpf::run_config_from_json(doc);
  mpf::validate(cfg);
  return cfg;
}

void print_table(const mpf::MetricTable& table) {
  std::printf("%-18s %7s %9s %9s %9s %9s %9s %9s %9s %9s %8s\n", "predictor", "scenes", "ade", "fde", "min_ade",
              "min_fde", "cvar_ade", "cvar_fde", "cvar_mADE", "cvar_mFDE", "mdb%");
  for (const auto& r : table.rows) {
    std::printf("%-18s %7zu %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f %8.2f\n", r.predictor.c_str(), r.scenes,
                r.mean[0], r.mean[1], r.mean[2], r.mean[3], r.cvar[0], r.cvar[1], r.cvar[2], r.cvar[3], r.mdb);
  }
}

void report_failures(const mpf::RunReport& report) {
  if (report.failed_episodes == 0) return;
  std::fprintf(stderr, "%zu of %zu episodes failed\n", report.failed_episodes, report.episodes);
  for (const auto& f : report.failures) std::fprintf(stderr, "  %s\n", f.c_str());
}

int cmd_generate(const ConfigOptions& opts) {
  const mpf::RunConfig cfg = build_config(opts);
  const mpf::Dataset data = mpf::generate_suite(cfg.suite);
  fs::create_directories(cfg.out);
  const fs::path path = fs::path(cfg.out) / "dataset.json";
  mpf::save_dataset(data, path);
  std::printf("wrote %zu episodes to %s\n", data.episodes.size(), path.c_str());
  return kOk;
}

int cmd_run(const ConfigOptions& opts) {
  const mpf::RunConfig cfg = build_config(opts);
  const mpf::RunReport report = mpf::run(cfg);
  report_failures(report);
  if (report.records.empty())
    throw mpf::RuntimeFailure(report.failed_episodes ? "every episode failed" : "dataset has no scenes");
  mpf::write_run(cfg.out, report);
  fs::path cfg_path = fs::path(cfg.out) / "config.json";
  mpf::write_file(cfg_path, mpf::to_json(cfg).dump(2) + "\n");
  print_table(report.table);
  std::printf("%zu scenes, %zu/%zu episodes failed, outputs in %s\n", report.scenes, report.failed_episodes,
              report.episodes, cfg.out.c_str());
  return kOk;
}

int cmd_sweep(const ConfigOptions& opts, const std::vector<double>& etas) {
  const mpf::RunConfig cfg = build_config(opts);
  const mpf::Dataset data = mpf::resolve_dataset(cfg);
  const mpf::SweepReport sweep = mpf::sweep_eta(cfg, data, etas);
  fs::create_directories(cfg.out);
  for (std::size_t j = 0; j < etas.size(); ++j) {
    report_failures(sweep.runs[j]);
    mpf::write_run(fs::path(cfg.out) / ("eta_" + mpf::format_double(etas[j])), sweep.runs[j]);
  }
  const std::string table = mpf::sweep_csv(sweep);
  mpf::write_file(fs::path(cfg.out) / "sweep.csv", table);
  mpf::write_file(fs::path(cfg.out) / "sweep.json", mpf::sweep_json(sweep).dump(2) + "\n");
  std::printf("MPF MDB (%%) per eta\n%s", table.c_str());
  return kOk;
}

int cmd_report(const std::string& run_dir, const std::string& out) {
  mpf::report_from_dir(run_dir, out.empty() ? run_dir : out);
  const auto records = mpf::parse_metrics_csv(mpf::read_file(fs::path(out.empty() ? run_dir : out) / mpf::kMetricsCsv));
  print_table(mpf::summarize(records, mpf::predictor_order(records)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-predictor fusion of rule-hierarchy and learned trajectory predictors"};
  app.require_subcommand(1);

  ConfigOptions gen_opts, run_opts, sweep_opts;
  auto* gen = app.add_subcommand("generate", "generate the synthetic scenario suite into <out>/dataset.json");
  add_config_options(*gen, gen_opts);
  auto* run = app.add_subcommand("run", "run fusion over a dataset and write metrics and reports to <out>");
  add_config_options(*run, run_opts);
  auto* sweep = app.add_subcommand("sweep-eta", "repeat the run for several learning rates");
  add_config_options(*sweep, sweep_opts);
  std::vector<double> etas{0.1, 0.4, 0.7, 1.0};
  sweep->add_option("--etas", etas, "learning rates")->delimiter(',')->capture_default_str();
  auto* rep = app.add_subcommand("report", "rebuild summary, scatter, and histogram files from a run directory");
  std::string run_dir, rep_out;
  rep->add_option("--run-dir", run_dir, "directory written by run")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", rep_out, "output directory (default: the run directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*gen) return cmd_generate(gen_opts);
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts, etas);
    if (*rep) return cmd_report(run_dir, rep_out);
  } catch (const mpf::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return kRuntime;
  }
  return kOk;
}
