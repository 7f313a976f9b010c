#include "gitrank/pipeline.hpp"

#include <spdlog/spdlog.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "gitrank/complexity.hpp"
#include "gitrank/errors.hpp"
#include "gitrank/security.hpp"
#include "gitrank/source.hpp"
#include "gitrank/style.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace gitrank {

json to_json(const RepoRecord& record) {
  json doc = {{"schema_version", kRecordSchemaVersion},
              {"name", record.name},
              {"url", record.url},
              {"head_commit", record.head_commit},
              {"evaluated_at", format_timestamp(record.evaluated_at)},
              {"status", record.status == RecordStatus::Measured ? "measured" : "dropped"}};
  if (record.status == RecordStatus::Dropped) {
    doc["reason"] = record.drop_reason;
  } else {
    json measures = json::object();
    for (const Measure m : kAllMeasures) measures[std::string(slug(m))] = record.measures[m];
    doc["measures"] = std::move(measures);
  }
  doc["stats"] = {{"files", record.file_count},
                  {"functions", record.function_count},
                  {"sloc", record.sloc}};
  return doc;
}

RepoRecord record_from_json(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kRecordSchemaVersion) {
      throw Error("unsupported schema_version " + doc.at("schema_version").dump());
    }
    RepoRecord r;
    r.name = doc.at("name").get<std::string>();
    r.url = doc.at("url").get<std::string>();
    r.head_commit = doc.at("head_commit").get<std::string>();
    const auto when = parse_timestamp(doc.at("evaluated_at").get<std::string>());
    if (!when) throw Error("bad evaluated_at");
    r.evaluated_at = *when;
    const auto status = doc.at("status").get<std::string>();
    if (status == "dropped") {
      r.status = RecordStatus::Dropped;
      r.drop_reason = doc.at("reason").get<std::string>();
    } else if (status == "measured") {
      r.status = RecordStatus::Measured;
      const auto& measures = doc.at("measures");
      for (const Measure m : kAllMeasures) {
        const double v = measures.at(std::string(slug(m))).get<double>();
        if (!std::isfinite(v)) throw Error("non-finite " + std::string(slug(m)));
        r.measures[m] = v;
      }
    } else {
      throw Error("unknown status '" + status + "'");
    }
    if (doc.contains("stats")) {
      const auto& stats = doc.at("stats");
      r.file_count = stats.value("files", std::size_t{0});
      r.function_count = stats.value("functions", std::size_t{0});
      r.sloc = stats.value("sloc", std::size_t{0});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed record: ") + e.what());
  }
}

std::string record_file_name(std::string_view url) {
  try {
    return repo_dir_name(repo_name_from_url(url)) + ".json";
  } catch (const InvalidUrl&) {
    std::string safe;
    for (const char c : url) {
      const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '.';
      safe.push_back(keep ? c : '_');
    }
    return "invalid_" + safe + ".json";
  }
}

namespace {

struct CodeScan {
  std::vector<FileCodeMetrics> files;
  std::size_t style_findings{0};
  std::vector<SecurityFinding> security;
  std::size_t sloc{0};
};

CodeScan scan_sources(const fs::path& root, const RunConfig& config) {
  CodeScan scan;
  for (const auto& file : discover_files(root, config.extensions)) {
    const auto text = read_source_text(root / file.path);
    if (!text) continue;
    const auto tokens = tokenize(*text);
    const auto rel = file.path.generic_string();
    auto metrics = analyze_source(*text, tokens);
    scan.sloc += metrics.lines.source;
    scan.style_findings += lint_file(*text, tokens, config.style, rel).size();
    auto found = scan_file(tokens, config.security, rel);
    scan.security.insert(scan.security.end(), std::make_move_iterator(found.begin()),
                         std::make_move_iterator(found.end()));
    scan.files.push_back(std::move(metrics));
  }
  return scan;
}

RepoRecord dropped(RepoRecord record, std::string reason) {
  record.status = RecordStatus::Dropped;
  record.drop_reason = std::move(reason);
  return record;
}

MetadataSource metadata_source(const RunConfig& config, const std::string& name,
                               Timestamp evaluated_at, RateLimitGovernor& governor) {
  if (config.fixtures) return Fixture{*config.fixtures / (repo_dir_name(name) + ".json")};
  LiveApi live;
  live.token = config.api_token;
  live.base_url = config.api_base_url;
  live.closed_since = evaluated_at - std::chrono::days{kWindow2y};
  live.retry = config.retry;
  live.governor = &governor;
  return live;
}

}  // namespace

RepoRecord measure_repository(std::string_view url, const RunConfig& config,
                              Timestamp evaluated_at, RateLimitGovernor& governor) {
  RepoRecord record;
  record.url = std::string(url);
  record.name = std::string(url);
  record.evaluated_at = evaluated_at;

  RepoSource repo;
  try {
    repo = clone_or_open(url, config.workdir);
  } catch (const Error& e) {
    try {
      record.name = repo_name_from_url(url);
    } catch (const InvalidUrl&) {
    }
    return dropped(std::move(record), e.what());
  }
  record.name = repo.name;
  record.head_commit = repo.head_commit;

  const CodeScan scan = scan_sources(repo.local_path, config);
  record.file_count = scan.files.size();
  record.sloc = scan.sloc;
  if (scan.files.empty() || scan.sloc == 0) {
    return dropped(std::move(record), "no analyzable source");
  }
  RepoCodeMetrics code;
  try {
    code = repo_code_metrics(scan.files);
  } catch (const NoAnalyzableCode& e) {
    return dropped(std::move(record), e.what());
  }
  record.function_count = code.function_count;

  RawMetadata raw;
  try {
    raw = fetch_repo_info(repo.name, metadata_source(config, repo.name, evaluated_at, governor));
  } catch (const Error& e) {
    return dropped(std::move(record), std::string("metadata unavailable: ") + e.what());
  }
  if (raw.created_at > evaluated_at) {
    return dropped(std::move(record), "repository created after the evaluation time");
  }
  const ActivitySnapshot activity = build_snapshot(raw, evaluated_at);
  const SecurityDensities sec = security_densities(scan.security, scan.sloc);

  MeasureVector& m = record.measures;
  m[Measure::AvgCc] = code.avg_cc;
  m[Measure::StyleDensity] = style_density(scan.style_findings, scan.sloc);
  m[Measure::SecLowDensity] = sec.low;
  m[Measure::SecMediumDensity] = sec.medium;
  m[Measure::SecHighDensity] = sec.high;
  m[Measure::AvgMi] = code.avg_mi;
  m[Measure::Closed2y] = static_cast<double>(activity.closed_2y);
  m[Measure::Closed1y] = static_cast<double>(activity.closed_1y);
  m[Measure::Closed6m] = static_cast<double>(activity.closed_6m);
  m[Measure::Closed1m] = static_cast<double>(activity.closed_1m);
  m[Measure::CommitsPerDay] = activity.commits_per_day;
  m[Measure::SubscribersPerDay] = activity.subscribers_per_day;
  m[Measure::StargazersPerDay] = activity.stargazers_per_day;
  m[Measure::ForksPerDay] = activity.forks_per_day;
  record.status = RecordStatus::Measured;
  return record;
}

namespace {

void write_atomically(const fs::path& target, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out.flush()) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + target.string());
  }
}

}  // namespace

Phase1Summary phase1(const RunConfig& config) {
  config.validate();
  const auto urls = read_repo_list(config.input);
  std::error_code ec;
  fs::create_directories(config.metrics_dir, ec);
  if (ec || !fs::is_directory(config.metrics_dir)) {
    throw ConfigError("cannot create metrics directory " + config.metrics_dir.string());
  }
  const Timestamp evaluated_at =
      config.evaluated_at.value_or(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
  const auto assigned = shard_indices(urls.size(), config.shard);

  Phase1Summary summary;
  summary.assigned = assigned.size();
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> measured{0};
  std::atomic<std::size_t> dropped_count{0};
  std::atomic<std::size_t> skipped{0};
  RateLimitGovernor governor;

  const auto worker = [&] {
    for (std::size_t k = next++; k < assigned.size(); k = next++) {
      const std::string& url = urls[assigned[k]];
      const fs::path target = config.metrics_dir / record_file_name(url);
      if (!config.force && fs::exists(target)) {
        ++skipped;
        continue;
      }
      RepoRecord record = measure_repository(url, config, evaluated_at, governor);
      if (record.status == RecordStatus::Measured) {
        ++measured;
        if (config.verbosity > 0) spdlog::info("measured {}", record.name);
      } else {
        ++dropped_count;
        spdlog::warn("dropped {}: {}", record.name, record.drop_reason);
      }
      try {
        write_atomically(target, to_json(record).dump(2) + "\n");
      } catch (const IoError& e) {
        spdlog::error("{}", e.what());
      }
    }
  };

  const unsigned jobs = std::max(1U, std::min<unsigned>(config.jobs, assigned.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  summary.measured = measured;
  summary.dropped = dropped_count;
  summary.skipped = skipped;
  return summary;
}

RankingResult rank_records(std::span<const RepoRecord> records, const ScoringOptions& options) {
  RankingResult result;
  std::vector<NamedMeasures> measured;
  std::set<std::string> stamps;
  for (const auto& r : records) {
    if (r.status == RecordStatus::Measured) {
      stamps.insert(format_timestamp(r.evaluated_at));
      measured.push_back({r.name, r.measures});
    } else {
      result.dropped.push_back({r.name, r.drop_reason});
    }
  }
  if (measured.empty()) throw NoMeasuredRepos("no measured repositories to rank");
  result.evaluated_at.assign(stamps.begin(), stamps.end());
  std::sort(result.dropped.begin(), result.dropped.end(),
            [](const DroppedRepo& a, const DroppedRepo& b) {
              return a.name != b.name ? a.name < b.name : a.reason < b.reason;
            });

  auto cards = score_repositories(measured, options);
  result.ranked.reserve(cards.size());
  for (std::size_t i = 0; i < cards.size(); ++i) {
    result.ranked.push_back({0, std::move(cards[i]), measured[i].measures});
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const RankedRepo& a, const RankedRepo& b) { return ranks_before(a.card, b.card); });
  for (std::size_t i = 0; i < result.ranked.size(); ++i) result.ranked[i].rank = i + 1;
  return result;
}

RankingResult phase2(const fs::path& metrics_dir, const RunConfig& config) {
  validate_specs(config.scoring.specs);
  std::error_code ec;
  if (!fs::is_directory(metrics_dir, ec)) {
    throw ConfigError("metrics directory " + metrics_dir.string() + " does not exist");
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(metrics_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());

  std::vector<RepoRecord> records;
  records.reserve(paths.size());
  for (const auto& path : paths) {
    std::ifstream in(path);
    try {
      records.push_back(record_from_json(json::parse(in)));
    } catch (const std::exception& e) {
      spdlog::warn("ignoring {}: {}", path.string(), e.what());
    }
  }
  return rank_records(records, config.scoring);
}

}  // namespace gitrank
