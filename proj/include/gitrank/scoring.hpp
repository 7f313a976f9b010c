#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gitrank {

/// The fourteen per-repository measures, in report column order.
enum class Measure : std::size_t {
  AvgCc,
  StyleDensity,
  SecLowDensity,
  SecMediumDensity,
  SecHighDensity,
  AvgMi,
  Closed2y,
  Closed1y,
  Closed6m,
  Closed1m,
  CommitsPerDay,
  SubscribersPerDay,
  StargazersPerDay,
  ForksPerDay,
};

inline constexpr std::size_t kMeasureCount = 14;

inline constexpr std::array<Measure, kMeasureCount> kAllMeasures = {
    Measure::AvgCc,         Measure::StyleDensity,      Measure::SecLowDensity,
    Measure::SecMediumDensity, Measure::SecHighDensity, Measure::AvgMi,
    Measure::Closed2y,      Measure::Closed1y,          Measure::Closed6m,
    Measure::Closed1m,      Measure::CommitsPerDay,     Measure::SubscribersPerDay,
    Measure::StargazersPerDay, Measure::ForksPerDay};

/// Stable slug used in records, config keys and report headers.
std::string_view slug(Measure m);
std::optional<Measure> measure_from_slug(std::string_view slug);

enum class Category { Quality, Maintainability, Popularity };
enum class Polarity { Benefit, Cost };

std::string_view to_string(Category c);

struct MeasureSpec {
  Measure id;
  Category category;
  Polarity polarity;
  double weight;
};

/// Raw measure values of one repository.
class MeasureVector {
 public:
  double& operator[](Measure m) { return values_[static_cast<std::size_t>(m)]; }
  double operator[](Measure m) const { return values_[static_cast<std::size_t>(m)]; }
  [[nodiscard]] const std::array<double, kMeasureCount>& values() const { return values_; }

  bool operator==(const MeasureVector&) const = default;

 private:
  std::array<double, kMeasureCount> values_{};
};

/// Default specs: quality and popularity equally weighted; maintainability
/// weighted {avg_mi .30, closed_2y .05, closed_1y .10, closed_6m .15,
/// closed_1m .25, commits_per_day .15}. Complexity and error densities are Cost.
std::vector<MeasureSpec> default_measure_specs();

/// Every measure exactly once and weights in (0, 1] summing to 1 per category
/// (1e-9). Throws ConfigError.
void validate_specs(std::span<const MeasureSpec> specs);

inline constexpr double kDegenerateScore = 50.0;

/// Min-max position of every value in [0, 100]. Cost inverts the scale. When
/// all values are equal every output is `degenerate`.
std::vector<double> normalize(std::span<const double> raw, Polarity polarity,
                              double degenerate = kDegenerateScore);

/// Weighted sum of the category's normalized measures. Throws MissingMeasure.
double category_score(const std::map<Measure, double>& normalized,
                      std::span<const MeasureSpec> specs, Category category);

double overall_score(double quality, double maintainability, double popularity);

struct ScoreCard {
  std::string name;
  double quality{0.0};
  double maintainability{0.0};
  double popularity{0.0};
  double overall{0.0};
};

struct ScoringOptions {
  std::vector<MeasureSpec> specs = default_measure_specs();
  double degenerate = kDegenerateScore;
};

struct NamedMeasures {
  std::string name;
  MeasureVector measures;
};

/// Normalizes every measure across `repos` and returns one card per repo in
/// input order.
std::vector<ScoreCard> score_repositories(std::span<const NamedMeasures> repos,
                                          const ScoringOptions& options = {});

/// Ranking order: higher overall first, then ascending name.
bool ranks_before(const ScoreCard& a, const ScoreCard& b);

/// Descending overall score; equal scores ordered by name.
std::vector<ScoreCard> rank(std::vector<ScoreCard> cards);

}  // namespace gitrank
