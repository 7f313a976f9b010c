#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gitrank/metadata.hpp"
#include "gitrank/scoring.hpp"
#include "gitrank/security.hpp"
#include "gitrank/source.hpp"
#include "gitrank/style.hpp"

namespace gitrank {

/// Phase-1 partition: this process handles list positions p with
/// p % total == index.
struct Shard {
  std::size_t index{0};
  std::size_t total{1};

  bool operator==(const Shard&) const = default;
};

/// "i/N" with 0 <= i < N. Throws ConfigError.
Shard parse_shard(std::string_view text);

/// Ascending list positions assigned to `shard` out of `count` entries.
std::vector<std::size_t> shard_indices(std::size_t count, Shard shard);

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path workdir{"gitrank-work"};
  std::filesystem::path metrics_dir{"metrics"};
  std::filesystem::path csv_out;
  std::filesystem::path html_out;
  Shard shard;
  unsigned jobs{1};
  int verbosity{0};
  bool force{false};
  /// Pinned evaluation time; now() at run start when unset.
  std::optional<Timestamp> evaluated_at;

  /// Offline metadata: `<dir>/<owner>__<repo>.json`. Live API when unset.
  std::optional<std::filesystem::path> fixtures;
  std::string api_token;
  std::string api_base_url{"https://api.github.com"};
  RetryPolicy retry;

  ExtensionMap extensions = ExtensionMap::defaults();
  StyleRuleset style = StyleRuleset::defaults();
  SecurityRuleset security = SecurityRuleset::defaults();
  ScoringOptions scoring;

  /// Throws ConfigError.
  void validate() const;
};

/// Applies a config document on top of `config`. Sections:
///
///   [run]                      input, workdir, metrics, csv, html, shard = "i/N",
///                              jobs, verbosity, fixtures, evaluated_at,
///                              api_base_url, max_retries, degenerate_score
///   [weights.<category>]       <measure slug> = weight
///   [polarity]                 <measure slug> = "benefit" | "cost"
///   [extensions]               ".ext" = "c" | "cpp"
///   [style.rules]              <rule id> = true | false, max_line_length = N,
///                              pattern.<id> = "regex"
///   [security.rules]           high|medium|low = ["fn", ...], remove = ["fn", ...]
///
/// Values: "strings", numbers, true/false, single-line ["string", ...] arrays.
/// `#` starts a comment outside strings. Throws ConfigError with the line number.
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

}  // namespace gitrank
