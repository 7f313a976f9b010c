// gitrank command line: `measure` (phase 1), `rank` (phase 2), `run` (both).

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "gitrank/config.hpp"
#include "gitrank/errors.hpp"
#include "gitrank/pipeline.hpp"
#include "gitrank/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNoMeasured = 2;

struct Options {
  std::string config_file;
  std::string input;
  std::string out;
  std::string workdir;
  std::string shard;
  unsigned jobs{0};
  std::string fixtures;
  std::string evaluated_at;
  std::string api_base_url;
  bool force{false};
  std::string metrics;
  std::string csv;
  std::string html;
  int verbose{0};
};

void add_measure_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--config", o.config_file, "TOML-style configuration file");
  cmd.add_option("--input", o.input, "repository list, one URL per line");
  cmd.add_option("--out", o.out, "directory for per-repository JSON records");
  cmd.add_option("--workdir", o.workdir, "directory holding working copies");
  cmd.add_option("--shard", o.shard, "process list positions p with p % N == i (i/N)");
  cmd.add_option("--jobs", o.jobs, "parallel repository workers")->check(CLI::PositiveNumber);
  cmd.add_option("--fixtures", o.fixtures, "offline metadata directory (<owner>__<repo>.json)");
  cmd.add_option("--evaluated-at", o.evaluated_at, "evaluation time, ISO-8601 (default: now)");
  cmd.add_option("--api-base-url", o.api_base_url, "hosting REST API root");
  cmd.add_flag("--force", o.force, "re-measure repositories that already have a record");
}

void add_rank_options(CLI::App& cmd, Options& o, bool with_metrics) {
  if (with_metrics) {
    cmd.add_option("--config", o.config_file, "TOML-style configuration file");
    cmd.add_option("--metrics", o.metrics, "directory of JSON records");
  }
  cmd.add_option("--csv", o.csv, "CSV report path");
  cmd.add_option("--html", o.html, "HTML report path");
  cmd.add_flag("-v", o.verbose, "verbosity: -v adds category scores, -vv adds raw measures");
}

gitrank::RunConfig build_config(const Options& o) {
  gitrank::RunConfig config;
  if (const char* token = std::getenv("GITRANK_TOKEN")) config.api_token = token;
  if (!o.config_file.empty()) gitrank::apply_config_file(config, o.config_file);
  if (!o.input.empty()) config.input = o.input;
  if (!o.out.empty()) config.metrics_dir = o.out;
  if (!o.metrics.empty()) config.metrics_dir = o.metrics;
  if (!o.workdir.empty()) config.workdir = o.workdir;
  if (!o.shard.empty()) config.shard = gitrank::parse_shard(o.shard);
  if (o.jobs > 0) config.jobs = o.jobs;
  if (!o.fixtures.empty()) config.fixtures = o.fixtures;
  if (!o.api_base_url.empty()) config.api_base_url = o.api_base_url;
  if (o.force) config.force = true;
  if (!o.evaluated_at.empty()) {
    const auto t = gitrank::parse_timestamp(o.evaluated_at);
    if (!t) throw gitrank::ConfigError("bad --evaluated-at '" + o.evaluated_at + "'");
    config.evaluated_at = *t;
  }
  if (!o.csv.empty()) config.csv_out = o.csv;
  if (!o.html.empty()) config.html_out = o.html;
  if (o.verbose > 0) config.verbosity = std::min(o.verbose, 2);
  config.validate();
  return config;
}

void do_measure(const gitrank::RunConfig& config) {
  if (config.input.empty()) throw gitrank::ConfigError("--input is required");
  const auto summary = gitrank::phase1(config);
  spdlog::info("shard {}/{}: {} assigned, {} measured, {} dropped, {} already present",
               config.shard.index, config.shard.total, summary.assigned, summary.measured,
               summary.dropped, summary.skipped);
}

void do_rank(const gitrank::RunConfig& config) {
  if (config.csv_out.empty() && config.html_out.empty()) {
    throw gitrank::ConfigError("at least one of --csv or --html is required");
  }
  const auto result = gitrank::phase2(config.metrics_dir, config);
  if (!config.csv_out.empty()) gitrank::emit_csv(result, config.verbosity, config.csv_out);
  if (!config.html_out.empty()) gitrank::emit_html(result, config.verbosity, config.html_out);
  spdlog::info("ranked {} repositories, {} dropped", result.ranked.size(), result.dropped.size());
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("gitrank"));
  CLI::App app{"Rank C/C++ repositories by quality, maintainability and popularity"};
  app.require_subcommand(1);
  // One Options per subcommand: CLI11 resets counted flags bound through
  // subcommands that were not invoked.
  Options measure_opts, rank_opts, run_opts;

  auto* measure = app.add_subcommand("measure", "phase 1: measure repositories into JSON records");
  add_measure_options(*measure, measure_opts);
  auto* rank = app.add_subcommand("rank", "phase 2: normalize, score and rank measured records");
  add_rank_options(*rank, rank_opts, true);
  auto* run = app.add_subcommand("run", "phase 1 followed by phase 2");
  add_measure_options(*run, run_opts);
  add_rank_options(*run, run_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*measure) do_measure(build_config(measure_opts));
    if (*rank) do_rank(build_config(rank_opts));
    if (*run) {
      const auto config = build_config(run_opts);
      do_measure(config);
      do_rank(config);
    }
  } catch (const gitrank::NoMeasuredRepos& e) {
    spdlog::error("{}", e.what());
    return kExitNoMeasured;
  } catch (const gitrank::Error& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
