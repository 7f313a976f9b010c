#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gitrank/config.hpp"
#include "gitrank/metadata.hpp"
#include "gitrank/scoring.hpp"

namespace gitrank {

inline constexpr int kRecordSchemaVersion = 1;

enum class RecordStatus { Measured, Dropped };

/// Phase-1 output for one repository, persisted as one JSON file.
struct RepoRecord {
  std::string name;
  std::string url;
  std::string head_commit;
  Timestamp evaluated_at;
  RecordStatus status{RecordStatus::Dropped};
  std::string drop_reason;
  MeasureVector measures;  ///< complete when status == Measured
  std::size_t file_count{0};
  std::size_t function_count{0};
  std::size_t sloc{0};
};

nlohmann::json to_json(const RepoRecord& record);
/// Throws Error on a missing field or unsupported schema_version.
RepoRecord record_from_json(const nlohmann::json& doc);

/// Record file name for a list entry: `<owner>__<repo>.json`, or a sanitized
/// form of the URL when no owner/repo can be derived.
std::string record_file_name(std::string_view url);

/// Phase 1 for a single repository. Never throws for per-repository failures:
/// they come back as Dropped records with a reason.
RepoRecord measure_repository(std::string_view url, const RunConfig& config,
                              Timestamp evaluated_at, RateLimitGovernor& governor);

struct Phase1Summary {
  std::size_t assigned{0};
  std::size_t measured{0};
  std::size_t dropped{0};
  std::size_t skipped{0};  ///< record already present and force not set
};

/// Measures this shard's repositories with `config.jobs` workers and writes
/// one record per repository into config.metrics_dir (temp file + rename).
/// Throws ConfigError for unreadable input or invalid settings.
Phase1Summary phase1(const RunConfig& config);

struct RankedRepo {
  std::size_t rank{0};  ///< 1-based
  ScoreCard card;
  MeasureVector measures;
};

struct DroppedRepo {
  std::string name;
  std::string reason;
};

struct RankingResult {
  std::vector<RankedRepo> ranked;
  std::vector<DroppedRepo> dropped;  ///< sorted by name
  std::vector<std::string> evaluated_at;  ///< distinct record timestamps, sorted
};

/// Scores and ranks the Measured records; Dropped ones are listed separately.
/// Throws NoMeasuredRepos.
RankingResult rank_records(std::span<const RepoRecord> records, const ScoringOptions& options);

/// Reads every `*.json` record in `metrics_dir` (all shards) and ranks them.
RankingResult phase2(const std::filesystem::path& metrics_dir, const RunConfig& config);

}  // namespace gitrank
