#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <random>
#include <thread>

#include "../support.hpp"
#include "gitrank/errors.hpp"
#include "gitrank/metadata.hpp"

using namespace gitrank;
using namespace std::chrono;
using nlohmann::json;

namespace {

Timestamp ts(std::string_view s) {
  const auto t = parse_timestamp(s);
  REQUIRE(t.has_value());
  return *t;
}

Timestamp days_before(Timestamp t, int d) { return t - days(d); }

json fixture_doc() {
  return json{{"created_at", "2020-01-01T00:00:00Z"},
              {"default_branch", "main"},
              {"subscribers", 10},
              {"stargazers", 200},
              {"forks", 30},
              {"total_commits", 1500},
              {"closed_items",
               json::array({{{"closed_at", "2023-05-01T12:00:00Z"}, {"kind", "issue"}},
                            {{"closed_at", "2023-06-01T12:00:00Z"}, {"kind", "pull_request"}},
                            {{"closed_at", "2023-07-01T12:00:00Z"}, {"kind", "issue"}}})}};
}

// Serves one repository with 150 closed items over two pages and 1234 commits,
// optionally answering the first `throttle` requests with a rate-limit 403.
class StubApi {
 public:
  explicit StubApi(int throttle) : throttle_(throttle) {
    server_.Get("/api/repos/o/r", [this](const httplib::Request&, httplib::Response& res) {
      if (limited(res)) return;
      res.set_content(json{{"created_at", "2021-03-04T05:06:07Z"},
                           {"default_branch", "dev"},
                           {"subscribers_count", 7},
                           {"stargazers_count", 70},
                           {"forks_count", 700}}
                          .dump(),
                      "application/json");
    });
    server_.Get("/api/repos/o/r/issues", [this](const httplib::Request& req, httplib::Response& res) {
      if (limited(res)) return;
      seen_since_ = req.get_param_value("since");
      const int page = req.has_param("page") ? std::stoi(req.get_param_value("page")) : 1;
      json items = json::array();
      const int count = page == 1 ? 100 : 50;
      for (int i = 0; i < count; ++i) {
        json item = {{"closed_at", "2022-01-01T00:00:00Z"}};
        if (i % 3 == 0) item["pull_request"] = json::object();
        items.push_back(item);
      }
      items.push_back({{"closed_at", nullptr}});
      if (page == 1) {
        res.set_header("Link", "<http://stub/api/repos/o/r/issues?state=closed&per_page=100&page=2>; "
                               "rel=\"next\", <http://stub/api/repos/o/r/issues?page=2>; rel=\"last\"");
      }
      res.set_content(items.dump(), "application/json");
    });
    server_.Get("/api/repos/o/r/commits", [this](const httplib::Request& req, httplib::Response& res) {
      if (limited(res)) return;
      seen_sha_ = req.get_param_value("sha");
      res.set_header("Link", "<http://stub/api/repos/o/r/commits?per_page=1&page=2>; rel=\"next\", "
                             "<http://stub/api/repos/o/r/commits?per_page=1&page=1234>; rel=\"last\"");
      res.set_content("[{}]", "application/json");
    });
    server_.Get("/api/repos/o/missing", [](const httplib::Request&, httplib::Response& res) {
      res.status = 404;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubApi() {
    server_.stop();
    thread_.join();
  }

  [[nodiscard]] LiveApi api() const {
    LiveApi live;
    live.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/api";
    live.retry = RetryPolicy{5, milliseconds(5), milliseconds(50)};
    return live;
  }

  std::atomic<int> throttled_responses{0};
  std::string seen_since_;
  std::string seen_sha_;

 private:
  bool limited(httplib::Response& res) {
    if (throttle_ <= 0) return false;
    --throttle_;
    ++throttled_responses;
    res.status = 403;
    res.set_header("X-RateLimit-Remaining", "0");
    res.set_header("Retry-After", "30");
    return true;
  }

  std::atomic<int> throttle_;
  httplib::Server server_;
  int port_{0};
  std::thread thread_;
};

}  // namespace

TEST_SUITE("metadata") {

TEST_CASE("timestamps") {
  CHECK(format_timestamp(ts("2024-02-29T23:59:58Z")) == "2024-02-29T23:59:58Z");
  CHECK(ts("2024-01-01") == ts("2024-01-01T00:00:00Z"));
  CHECK(ts("2024-01-01T02:00:00+02:00") == ts("2024-01-01T00:00:00Z"));
  CHECK(ts("2024-01-01T00:00:00.750Z") == ts("2024-01-01T00:00:00Z"));
  CHECK_FALSE(parse_timestamp("yesterday").has_value());
  CHECK_FALSE(parse_timestamp("2024-13-01").has_value());
  CHECK_FALSE(parse_timestamp("2023-02-29").has_value());
}

TEST_CASE("window counts") {
  const auto eval = ts("2024-06-01T00:00:00Z");
  CHECK(closed_items_in_window({{days_before(eval, 10), ItemKind::Issue}}, 30, eval) == 1);
  CHECK(closed_items_in_window({{days_before(eval, 3 * 365), ItemKind::Issue}}, 730, eval) == 0);
  CHECK(closed_items_in_window({}, 30, eval) == 0);
  // Both ends inclusive; the future is excluded.
  CHECK(closed_items_in_window({{days_before(eval, 30), ItemKind::Issue}}, 30, eval) == 1);
  CHECK(closed_items_in_window({{days_before(eval, 30) - seconds(1), ItemKind::Issue}}, 30, eval) == 0);
  CHECK(closed_items_in_window({{eval, ItemKind::PullRequest}}, 30, eval) == 1);
  CHECK(closed_items_in_window({{eval + seconds(1), ItemKind::Issue}}, 30, eval) == 0);
}

TEST_CASE("per-day rates") {
  const auto eval = ts("2024-06-01T00:00:00Z");
  CHECK(per_day_rate(100, days_before(eval, 100), eval) == 1.0);
  CHECK(per_day_rate(0, days_before(eval, 57), eval) == 0.0);
  CHECK(per_day_rate(5, eval, eval) == 5.0);
  CHECK(per_day_rate(5, eval - hours(30), eval) == 5.0);
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto c = static_cast<std::uint64_t>(rng() % 10000);
    const int age = 1 + static_cast<int>(rng() % 4000);
    const auto created = days_before(eval, age);
    CHECK(per_day_rate(3 * c, created, eval) == doctest::Approx(3 * per_day_rate(c, created, eval)));
    CHECK(per_day_rate(c, days_before(created, 10), eval) <= per_day_rate(c, created, eval));
  }
}

TEST_CASE("snapshots") {
  const auto eval = ts("2024-06-01T00:00:00Z");
  RawMetadata zero;
  zero.created_at = days_before(eval, 400);
  const auto z = build_snapshot(zero, eval);
  CHECK(z.closed_2y + z.closed_1y + z.closed_6m + z.closed_1m == 0);
  CHECK(z.commits_per_day + z.subscribers_per_day + z.stargazers_per_day + z.forks_per_day == 0.0);

  RawMetadata raw;
  raw.created_at = days_before(eval, 900);
  raw.total_commits = 900;
  raw.stargazers = 1800;
  for (const int d : {20, 100, 300, 800}) raw.closed_items.push_back({days_before(eval, d)});
  const auto s = build_snapshot(raw, eval);
  CHECK(s.closed_1m == 1);
  CHECK(s.closed_6m == 2);
  CHECK(s.closed_1y == 3);
  CHECK(s.closed_2y == 3);
  CHECK(s.commits_per_day == 1.0);
  CHECK(s.stargazers_per_day == 2.0);

  RawMetadata commits;
  commits.created_at = days_before(eval, 730);
  commits.total_commits = 730;
  CHECK(build_snapshot(commits, eval).commits_per_day == 1.0);
}

TEST_CASE("fixtures") {
  test::TempDir tmp;
  const auto path = tmp.path() / "o__r.json";
  test::write_file(path, fixture_doc().dump());
  const auto raw = fetch_repo_info("o/r", Fixture{path});
  CHECK(raw.closed_items.size() == 3);
  CHECK(raw.closed_items[1].kind == ItemKind::PullRequest);
  CHECK(raw.stargazers == 200);
  CHECK(raw.default_branch == "main");
  CHECK(raw == fetch_repo_info("o/r", Fixture{path}));
  CHECK(parse_fixture(to_fixture_json(raw)) == raw);

  auto missing = fixture_doc();
  missing.erase("created_at");
  CHECK_THROWS_AS(parse_fixture(missing), FixtureMalformed);
  auto negative = fixture_doc();
  negative["forks"] = -1;
  CHECK_THROWS_AS(parse_fixture(negative), FixtureMalformed);
  auto bad_kind = fixture_doc();
  bad_kind["closed_items"][0]["kind"] = "commit";
  CHECK_THROWS_AS(parse_fixture(bad_kind), FixtureMalformed);
  auto early = fixture_doc();
  early["closed_items"][0]["closed_at"] = "2019-01-01T00:00:00Z";
  CHECK_THROWS_AS(parse_fixture(early), FixtureMalformed);

  test::write_file(tmp.path() / "broken.json", "{not json");
  CHECK_THROWS_AS(fetch_repo_info("o/r", Fixture{tmp.path() / "broken.json"}), FixtureMalformed);
  CHECK_THROWS_AS(fetch_repo_info("o/r", Fixture{tmp.path() / "absent.json"}), FixtureMalformed);
}

TEST_CASE("live api against a stub server") {
  StubApi plain(0);
  auto api = plain.api();
  api.closed_since = ts("2022-06-01T00:00:00Z");
  const auto unthrottled = fetch_repo_info("o/r", api);
  CHECK(unthrottled.created_at == ts("2021-03-04T05:06:07Z"));
  CHECK(unthrottled.default_branch == "dev");
  CHECK(unthrottled.subscribers == 7);
  CHECK(unthrottled.stargazers == 70);
  CHECK(unthrottled.forks == 700);
  CHECK(unthrottled.total_commits == 1234);
  CHECK(unthrottled.closed_items.size() == 150);
  const auto prs = std::count_if(unthrottled.closed_items.begin(), unthrottled.closed_items.end(),
                                 [](const ClosedItem& c) { return c.kind == ItemKind::PullRequest; });
  CHECK(prs == 34 + 17);
  CHECK(plain.seen_sha_ == "dev");
  CHECK(plain.seen_since_.empty());  // second page followed the Link target verbatim

  StubApi limited(2);
  RateLimitGovernor governor;
  auto throttled_api = limited.api();
  throttled_api.closed_since = api.closed_since;
  throttled_api.governor = &governor;
  const auto throttled = fetch_repo_info("o/r", throttled_api);
  CHECK(limited.throttled_responses == 2);
  CHECK(governor.throttled());
  CHECK(throttled == unthrottled);

  StubApi hopeless(100);
  auto give_up = hopeless.api();
  give_up.retry.max_retries = 2;
  CHECK_THROWS_AS(fetch_repo_info("o/r", give_up), ApiUnavailable);
  CHECK(hopeless.throttled_responses == 3);

  CHECK_THROWS_AS(fetch_repo_info("o/missing", plain.api()), ApiUnavailable);

  LiveApi nowhere;
  nowhere.base_url = "http://127.0.0.1:1";
  nowhere.retry = RetryPolicy{1, milliseconds(1), milliseconds(1)};
  CHECK_THROWS_AS(fetch_repo_info("o/r", nowhere), ApiUnavailable);
}

}  // TEST_SUITE
