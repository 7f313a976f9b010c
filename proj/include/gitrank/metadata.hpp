#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace gitrank {

using Timestamp = std::chrono::sys_seconds;

/// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SS[.frac][Z|+HH:MM|-HH:MM]`.
std::optional<Timestamp> parse_timestamp(std::string_view text);
/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_timestamp(Timestamp t);

enum class ItemKind { Issue, PullRequest };

struct ClosedItem {
  Timestamp closed_at;
  ItemKind kind{ItemKind::Issue};

  bool operator==(const ClosedItem&) const = default;
};

struct RawMetadata {
  Timestamp created_at;
  std::string default_branch;
  std::uint64_t subscribers{0};
  std::uint64_t stargazers{0};
  std::uint64_t forks{0};
  std::uint64_t total_commits{0};
  std::vector<ClosedItem> closed_items;

  bool operator==(const RawMetadata&) const = default;
};

struct ActivitySnapshot {
  Timestamp evaluated_at;
  std::uint64_t closed_2y{0};
  std::uint64_t closed_1y{0};
  std::uint64_t closed_6m{0};
  std::uint64_t closed_1m{0};
  double commits_per_day{0.0};
  double subscribers_per_day{0.0};
  double stargazers_per_day{0.0};
  double forks_per_day{0.0};
};

inline constexpr int kWindow2y = 730;
inline constexpr int kWindow1y = 365;
inline constexpr int kWindow6m = 182;
inline constexpr int kWindow1m = 30;

/// Items with evaluated_at - window_days * 86400 s <= closed_at <= evaluated_at.
std::uint64_t closed_items_in_window(const std::vector<ClosedItem>& items, int window_days,
                                     Timestamp evaluated_at);

/// count / max(1, whole days between created_at and evaluated_at).
double per_day_rate(std::uint64_t count, Timestamp created_at, Timestamp evaluated_at);

ActivitySnapshot build_snapshot(const RawMetadata& raw, Timestamp evaluated_at);

/// Serializes requests once the API has signalled throttling, and holds every
/// worker back until the advertised reset time.
class RateLimitGovernor {
 public:
  /// Blocks until any active back-off has elapsed. The returned lock is held
  /// (serializing callers) only after a throttle was observed.
  std::unique_lock<std::mutex> acquire();
  void throttled_until(std::chrono::steady_clock::time_point until);
  [[nodiscard]] bool throttled() const;

 private:
  mutable std::mutex state_;
  std::mutex serial_;
  std::chrono::steady_clock::time_point resume_at_{};
  bool throttled_{false};
};

struct RetryPolicy {
  int max_retries{5};
  std::chrono::milliseconds base_delay{1000};
  std::chrono::milliseconds max_delay{60000};
};

struct LiveApi {
  std::string token;  ///< empty = unauthenticated
  std::string base_url{"https://api.github.com"};
  /// Lower bound passed as `since` to the closed-issue listing.
  std::optional<Timestamp> closed_since;
  RetryPolicy retry;
  RateLimitGovernor* governor{nullptr};
};

struct Fixture {
  std::filesystem::path path;  ///< one JSON document for one repository
};

using MetadataSource = std::variant<LiveApi, Fixture>;

/// Throws ApiUnavailable (live) or FixtureMalformed (fixture).
RawMetadata fetch_repo_info(std::string_view name, const MetadataSource& source);

/// Fixture schema validation; throws FixtureMalformed.
RawMetadata parse_fixture(const nlohmann::json& doc);
nlohmann::json to_fixture_json(const RawMetadata& raw);

}  // namespace gitrank
