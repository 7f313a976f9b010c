#include "gitrank/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "gitrank/errors.hpp"

namespace gitrank {

namespace {

constexpr std::array<std::string_view, kMeasureCount> kSlugs = {
    "avg_cc",           "style_errors_per_sloc", "sec_low_per_sloc",   "sec_medium_per_sloc",
    "sec_high_per_sloc", "avg_mi",               "closed_2y",          "closed_1y",
    "closed_6m",        "closed_1m",             "commits_per_day",    "subscribers_per_day",
    "stargazers_per_day", "forks_per_day"};

}  // namespace

std::string_view slug(Measure m) { return kSlugs[static_cast<std::size_t>(m)]; }

std::optional<Measure> measure_from_slug(std::string_view s) {
  for (const Measure m : kAllMeasures) {
    if (slug(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Quality: return "quality";
    case Category::Maintainability: return "maintainability";
    case Category::Popularity: return "popularity";
  }
  return "unknown";
}

std::vector<MeasureSpec> default_measure_specs() {
  using enum Measure;
  constexpr auto Q = Category::Quality;
  constexpr auto M = Category::Maintainability;
  constexpr auto P = Category::Popularity;
  constexpr auto cost = Polarity::Cost;
  constexpr auto benefit = Polarity::Benefit;
  constexpr double third = 1.0 / 3.0;
  return {
      {AvgCc, Q, cost, 0.2},
      {StyleDensity, Q, cost, 0.2},
      {SecLowDensity, Q, cost, 0.2},
      {SecMediumDensity, Q, cost, 0.2},
      {SecHighDensity, Q, cost, 0.2},
      {AvgMi, M, benefit, 0.30},
      {Closed2y, M, benefit, 0.05},
      {Closed1y, M, benefit, 0.10},
      {Closed6m, M, benefit, 0.15},
      {Closed1m, M, benefit, 0.25},
      {CommitsPerDay, M, benefit, 0.15},
      {SubscribersPerDay, P, benefit, third},
      {StargazersPerDay, P, benefit, third},
      {ForksPerDay, P, benefit, third},
  };
}

void validate_specs(std::span<const MeasureSpec> specs) {
  std::array<int, kMeasureCount> seen{};
  std::array<double, 3> weight_sum{};
  for (const auto& spec : specs) {
    ++seen[static_cast<std::size_t>(spec.id)];
    if (!(spec.weight > 0.0 && spec.weight <= 1.0)) {
      throw ConfigError("weight of " + std::string(slug(spec.id)) + " must be in (0, 1]");
    }
    weight_sum[static_cast<std::size_t>(spec.category)] += spec.weight;
  }
  for (const Measure m : kAllMeasures) {
    if (seen[static_cast<std::size_t>(m)] != 1) {
      throw ConfigError("measure " + std::string(slug(m)) + " must appear exactly once");
    }
  }
  for (const auto c : {Category::Quality, Category::Maintainability, Category::Popularity}) {
    const double sum = weight_sum[static_cast<std::size_t>(c)];
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError(std::string(to_string(c)) + " weights sum to " + std::to_string(sum) +
                        ", expected 1");
    }
  }
}

std::vector<double> normalize(std::span<const double> raw, Polarity polarity, double degenerate) {
  std::vector<double> out(raw.size(), degenerate);
  if (raw.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi == lo) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double pos = polarity == Polarity::Benefit ? raw[i] - lo : hi - raw[i];
    out[i] = std::clamp(100.0 * (pos / range), 0.0, 100.0);
  }
  return out;
}

double category_score(const std::map<Measure, double>& normalized,
                      std::span<const MeasureSpec> specs, Category category) {
  // Weights sum to 1, so sum(w * n) == ref + sum(w * (n - ref)). Anchoring on
  // the first value makes a category of identical values score that value
  // exactly instead of up to rounding.
  std::optional<double> ref;
  double offset = 0.0;
  for (const auto& spec : specs) {
    if (spec.category != category) continue;
    const auto it = normalized.find(spec.id);
    if (it == normalized.end()) {
      throw MissingMeasure("no normalized value for " + std::string(slug(spec.id)));
    }
    if (!ref) ref = it->second;
    offset += spec.weight * (it->second - *ref);
  }
  return ref ? std::clamp(*ref + offset, 0.0, 100.0) : 0.0;
}

double overall_score(double quality, double maintainability, double popularity) {
  return (quality + maintainability + popularity) / 3.0;
}

std::vector<ScoreCard> score_repositories(std::span<const NamedMeasures> repos,
                                          const ScoringOptions& options) {
  std::vector<std::map<Measure, double>> normalized(repos.size());
  std::vector<double> column(repos.size());
  for (const auto& spec : options.specs) {
    for (std::size_t r = 0; r < repos.size(); ++r) column[r] = repos[r].measures[spec.id];
    const auto scaled = normalize(column, spec.polarity, options.degenerate);
    for (std::size_t r = 0; r < repos.size(); ++r) normalized[r][spec.id] = scaled[r];
  }

  std::vector<ScoreCard> cards;
  cards.reserve(repos.size());
  for (std::size_t r = 0; r < repos.size(); ++r) {
    ScoreCard card;
    card.name = repos[r].name;
    card.quality = category_score(normalized[r], options.specs, Category::Quality);
    card.maintainability = category_score(normalized[r], options.specs, Category::Maintainability);
    card.popularity = category_score(normalized[r], options.specs, Category::Popularity);
    card.overall = overall_score(card.quality, card.maintainability, card.popularity);
    cards.push_back(std::move(card));
  }
  return cards;
}

bool ranks_before(const ScoreCard& a, const ScoreCard& b) {
  if (a.overall != b.overall) return a.overall > b.overall;
  return a.name < b.name;
}

std::vector<ScoreCard> rank(std::vector<ScoreCard> cards) {
  std::stable_sort(cards.begin(), cards.end(), ranks_before);
  return cards;
}

}  // namespace gitrank
