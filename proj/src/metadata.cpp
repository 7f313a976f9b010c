#include "gitrank/metadata.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <thread>

#include "gitrank/errors.hpp"

using json = nlohmann::json;

namespace gitrank {

namespace {

constexpr std::chrono::seconds kDay{86400};

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const auto* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc{} && ptr == first + len;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
      !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  std::size_t pos = 10;
  std::chrono::seconds offset{0};
  if (pos < text.size()) {
    if ((text[pos] != 'T' && text[pos] != ' ') || text.size() < 19 || text[13] != ':' ||
        text[16] != ':' || !read_int(text, 11, 2, h) || !read_int(text, 14, 2, mi) ||
        !read_int(text, 17, 2, s) || h > 23 || mi > 59 || s > 60) {
      return std::nullopt;
    }
    pos = 19;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    if (pos < text.size()) {
      const char tz = text[pos];
      if (tz == 'Z' && pos + 1 == text.size()) {
        // UTC
      } else if ((tz == '+' || tz == '-') && text.size() == pos + 6 && text[pos + 3] == ':') {
        int oh = 0, om = 0;
        if (!read_int(text, pos + 1, 2, oh) || !read_int(text, pos + 4, 2, om)) return std::nullopt;
        offset = std::chrono::hours{oh} + std::chrono::minutes{om};
        if (tz == '-') offset = -offset;
      } else {
        return std::nullopt;
      }
    }
  }
  return Timestamp{std::chrono::sys_days{ymd}} + std::chrono::hours{h} +
         std::chrono::minutes{mi} + std::chrono::seconds{s} - offset;
}

std::string format_timestamp(Timestamp t) {
  const auto days = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{t - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

std::uint64_t closed_items_in_window(const std::vector<ClosedItem>& items, int window_days,
                                     Timestamp evaluated_at) {
  const Timestamp from = evaluated_at - window_days * kDay;
  return static_cast<std::uint64_t>(std::count_if(items.begin(), items.end(), [&](const ClosedItem& it) {
    return it.closed_at >= from && it.closed_at <= evaluated_at;
  }));
}

double per_day_rate(std::uint64_t count, Timestamp created_at, Timestamp evaluated_at) {
  const auto age_days = std::chrono::floor<std::chrono::days>(evaluated_at - created_at).count();
  return static_cast<double>(count) / static_cast<double>(std::max<std::int64_t>(1, age_days));
}

ActivitySnapshot build_snapshot(const RawMetadata& raw, Timestamp evaluated_at) {
  ActivitySnapshot snap;
  snap.evaluated_at = evaluated_at;
  snap.closed_2y = closed_items_in_window(raw.closed_items, kWindow2y, evaluated_at);
  snap.closed_1y = closed_items_in_window(raw.closed_items, kWindow1y, evaluated_at);
  snap.closed_6m = closed_items_in_window(raw.closed_items, kWindow6m, evaluated_at);
  snap.closed_1m = closed_items_in_window(raw.closed_items, kWindow1m, evaluated_at);
  snap.commits_per_day = per_day_rate(raw.total_commits, raw.created_at, evaluated_at);
  snap.subscribers_per_day = per_day_rate(raw.subscribers, raw.created_at, evaluated_at);
  snap.stargazers_per_day = per_day_rate(raw.stargazers, raw.created_at, evaluated_at);
  snap.forks_per_day = per_day_rate(raw.forks, raw.created_at, evaluated_at);
  return snap;
}

// --- rate-limit governor ---------------------------------------------------

std::unique_lock<std::mutex> RateLimitGovernor::acquire() {
  for (;;) {
    std::chrono::steady_clock::time_point resume;
    bool serial = false;
    {
      std::lock_guard lock(state_);
      resume = resume_at_;
      serial = throttled_;
    }
    const auto now = std::chrono::steady_clock::now();
    if (resume > now) {
      std::this_thread::sleep_until(resume);
      continue;
    }
    if (!serial) return {};
    std::unique_lock permit(serial_);
    std::lock_guard lock(state_);
    if (resume_at_ <= std::chrono::steady_clock::now()) return permit;
  }
}

void RateLimitGovernor::throttled_until(std::chrono::steady_clock::time_point until) {
  std::lock_guard lock(state_);
  throttled_ = true;
  resume_at_ = std::max(resume_at_, until);
}

bool RateLimitGovernor::throttled() const {
  std::lock_guard lock(state_);
  return throttled_;
}

// --- fixtures --------------------------------------------------------------

namespace {

Timestamp require_timestamp(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw FixtureMalformed(std::string("missing or non-string '") + key + "'");
  }
  const auto t = parse_timestamp(obj.at(key).get<std::string>());
  if (!t) throw FixtureMalformed(std::string("bad timestamp in '") + key + "'");
  return *t;
}

std::uint64_t require_count(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer() ||
      obj.at(key).get<std::int64_t>() < 0) {
    throw FixtureMalformed(std::string("missing or negative count '") + key + "'");
  }
  return obj.at(key).get<std::uint64_t>();
}

}  // namespace

RawMetadata parse_fixture(const json& doc) {
  if (!doc.is_object()) throw FixtureMalformed("fixture is not a JSON object");
  RawMetadata raw;
  raw.created_at = require_timestamp(doc, "created_at");
  if (!doc.contains("default_branch") || !doc.at("default_branch").is_string()) {
    throw FixtureMalformed("missing or non-string 'default_branch'");
  }
  raw.default_branch = doc.at("default_branch").get<std::string>();
  raw.subscribers = require_count(doc, "subscribers");
  raw.stargazers = require_count(doc, "stargazers");
  raw.forks = require_count(doc, "forks");
  raw.total_commits = require_count(doc, "total_commits");
  if (!doc.contains("closed_items") || !doc.at("closed_items").is_array()) {
    throw FixtureMalformed("missing 'closed_items' array");
  }
  for (const auto& item : doc.at("closed_items")) {
    if (!item.is_object()) throw FixtureMalformed("closed item is not an object");
    ClosedItem ci;
    ci.closed_at = require_timestamp(item, "closed_at");
    const auto kind = item.value("kind", std::string{});
    if (kind == "issue") {
      ci.kind = ItemKind::Issue;
    } else if (kind == "pull_request") {
      ci.kind = ItemKind::PullRequest;
    } else {
      throw FixtureMalformed("closed item kind must be \"issue\" or \"pull_request\"");
    }
    if (ci.closed_at < raw.created_at) {
      throw FixtureMalformed("closed item predates repository creation");
    }
    raw.closed_items.push_back(ci);
  }
  return raw;
}

json to_fixture_json(const RawMetadata& raw) {
  json items = json::array();
  for (const auto& it : raw.closed_items) {
    items.push_back({{"closed_at", format_timestamp(it.closed_at)},
                     {"kind", it.kind == ItemKind::Issue ? "issue" : "pull_request"}});
  }
  return {{"created_at", format_timestamp(raw.created_at)},
          {"default_branch", raw.default_branch},
          {"subscribers", raw.subscribers},
          {"stargazers", raw.stargazers},
          {"forks", raw.forks},
          {"total_commits", raw.total_commits},
          {"closed_items", std::move(items)}};
}

// --- live hosting API ------------------------------------------------------

namespace {

// "scheme://host[:port]" part of a base URL; httplib rejects anything longer.
std::string origin(const std::string& base_url) {
  const auto scheme = base_url.find("://");
  const auto slash = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  return slash == std::string::npos ? base_url : base_url.substr(0, slash);
}

class ApiClient {
 public:
  explicit ApiClient(const LiveApi& cfg) : cfg_(cfg), client_(origin(cfg.base_url)) {
    client_.set_connection_timeout(std::chrono::seconds(10));
    client_.set_read_timeout(std::chrono::seconds(60));
    client_.set_follow_location(true);
    headers_ = {{"Accept", "application/vnd.github+json"}, {"User-Agent", "gitrank"}};
    if (!cfg.token.empty()) headers_.emplace("Authorization", "Bearer " + cfg.token);
  }

  httplib::Result get(const std::string& path) {
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.retry.max_retries; ++attempt) {
      std::unique_lock<std::mutex> permit;
      if (cfg_.governor != nullptr) permit = cfg_.governor->acquire();
      auto res = client_.Get(path, headers_);
      if (permit.owns_lock()) permit.unlock();

      std::chrono::milliseconds wait = backoff(attempt);
      if (!res) {
        last_error = httplib::to_string(res.error());
      } else if (res->status == 200) {
        return res;
      } else if (is_throttle(*res)) {
        last_error = "rate limited (HTTP " + std::to_string(res->status) + ")";
        wait = std::max(wait, advertised_wait(*res));
        wait = std::min(wait, cfg_.retry.max_delay);
        if (cfg_.governor != nullptr) {
          cfg_.governor->throttled_until(std::chrono::steady_clock::now() + wait);
        }
      } else if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
      } else {
        throw ApiUnavailable(path + ": HTTP " + std::to_string(res->status));
      }
      if (attempt == cfg_.retry.max_retries) break;
      spdlog::debug("{}: {}, retrying in {} ms", path, last_error, wait.count());
      std::this_thread::sleep_for(wait);
    }
    throw ApiUnavailable(path + ": " + last_error + " after " +
                         std::to_string(cfg_.retry.max_retries) + " retries");
  }

 private:
  [[nodiscard]] std::chrono::milliseconds backoff(int attempt) const {
    auto delay = cfg_.retry.base_delay;
    for (int i = 0; i < attempt && delay < cfg_.retry.max_delay; ++i) delay *= 2;
    return std::min(delay, cfg_.retry.max_delay);
  }

  static bool is_throttle(const httplib::Response& res) {
    if (res.status == 429) return true;
    return res.status == 403 && (res.get_header_value("X-RateLimit-Remaining") == "0" ||
                                 res.has_header("Retry-After"));
  }

  static std::chrono::milliseconds advertised_wait(const httplib::Response& res) {
    long long seconds = 0;
    if (res.has_header("Retry-After")) {
      seconds = std::atoll(res.get_header_value("Retry-After").c_str());
    } else if (res.has_header("X-RateLimit-Reset")) {
      const long long reset = std::atoll(res.get_header_value("X-RateLimit-Reset").c_str());
      const long long now = std::chrono::duration_cast<std::chrono::seconds>(
                                std::chrono::system_clock::now().time_since_epoch())
                                .count();
      seconds = reset - now;
    }
    return std::chrono::milliseconds(std::max(0LL, seconds) * 1000);
  }

  const LiveApi& cfg_;
  httplib::Client client_;
  httplib::Headers headers_;
};

// `<url>; rel="next"` target with the scheme/host stripped.
std::optional<std::string> link_target(const httplib::Response& res, std::string_view rel) {
  const auto header = res.get_header_value("Link");
  const std::regex entry(R"re(<([^>]*)>\s*;\s*rel="([^"]*)")re");
  for (std::sregex_iterator it(header.begin(), header.end(), entry), end; it != end; ++it) {
    if ((*it)[2].str() != rel) continue;
    std::string url = (*it)[1].str();
    if (const auto scheme = url.find("://"); scheme != std::string::npos) {
      const auto slash = url.find('/', scheme + 3);
      url = slash == std::string::npos ? "/" : url.substr(slash);
    }
    return url;
  }
  return std::nullopt;
}

std::string base_path(const std::string& base_url) {
  const auto scheme = base_url.find("://");
  const auto slash = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash == std::string::npos) return {};
  std::string path = base_url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return path;
}

json parse_body(const httplib::Response& res, const std::string& path) {
  try {
    return json::parse(res.body);
  } catch (const json::exception& e) {
    throw ApiUnavailable(path + ": invalid JSON: " + e.what());
  }
}

RawMetadata fetch_live(std::string_view name, const LiveApi& cfg) {
  ApiClient client(cfg);
  const std::string repo_path = base_path(cfg.base_url) + "/repos/" + std::string(name);
  RawMetadata raw;

  try {
    const json repo = parse_body(*client.get(repo_path), repo_path);
    const auto created = parse_timestamp(repo.at("created_at").get<std::string>());
    if (!created) throw ApiUnavailable(repo_path + ": bad created_at");
    raw.created_at = *created;
    raw.default_branch = repo.at("default_branch").get<std::string>();
    raw.subscribers = repo.value("subscribers_count", std::uint64_t{0});
    raw.stargazers = repo.value("stargazers_count", std::uint64_t{0});
    raw.forks = repo.value("forks_count", std::uint64_t{0});

    std::string next = repo_path + "/issues?state=closed&per_page=100";
    if (cfg.closed_since) next += "&since=" + format_timestamp(*cfg.closed_since);
    for (int page = 1; !next.empty(); ++page) {
      const auto res = client.get(next);
      const json items = parse_body(*res, next);
      for (const auto& item : items) {
        if (!item.contains("closed_at") || !item.at("closed_at").is_string()) continue;
        const auto closed = parse_timestamp(item.at("closed_at").get<std::string>());
        if (!closed) continue;
        raw.closed_items.push_back(
            {*closed, item.contains("pull_request") ? ItemKind::PullRequest : ItemKind::Issue});
      }
      if (const auto link = link_target(*res, "next")) {
        next = *link;
      } else if (!res->has_header("Link") && items.size() == 100) {
        next = repo_path + "/issues?state=closed&per_page=100&page=" + std::to_string(page + 1);
        if (cfg.closed_since) next += "&since=" + format_timestamp(*cfg.closed_since);
      } else {
        next.clear();
      }
    }

    const std::string commits_path =
        repo_path + "/commits?per_page=1&sha=" + httplib::detail::encode_query_param(raw.default_branch);
    const auto res = client.get(commits_path);
    if (const auto last = link_target(*res, "last")) {
      const std::regex page_re(R"([?&]page=(\d+))");
      std::smatch m;
      if (std::regex_search(*last, m, page_re)) raw.total_commits = std::stoull(m[1].str());
    } else {
      raw.total_commits = parse_body(*res, commits_path).size();
    }
  } catch (const json::exception& e) {
    throw ApiUnavailable(repo_path + ": unexpected response shape: " + e.what());
  }
  return raw;
}

}  // namespace

RawMetadata fetch_repo_info(std::string_view name, const MetadataSource& source) {
  if (const auto* live = std::get_if<LiveApi>(&source)) return fetch_live(name, *live);

  const auto& fixture = std::get<Fixture>(source);
  std::ifstream in(fixture.path);
  if (!in) throw FixtureMalformed("cannot read fixture " + fixture.path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FixtureMalformed(fixture.path.string() + ": " + e.what());
  }
  try {
    return parse_fixture(doc);
  } catch (const FixtureMalformed& e) {
    throw FixtureMalformed(fixture.path.string() + ": " + e.what());
  }
}

}  // namespace gitrank
