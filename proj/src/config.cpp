#include "gitrank/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <variant>

#include "gitrank/errors.hpp"

namespace gitrank {

Shard parse_shard(std::string_view text) {
  const auto slash = text.find('/');
  Shard shard;
  const auto parse = [&](std::string_view part, std::size_t& out) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc{} && ptr == part.data() + part.size() && !part.empty();
  };
  if (slash == std::string_view::npos || !parse(text.substr(0, slash), shard.index) ||
      !parse(text.substr(slash + 1), shard.total) || shard.total == 0 ||
      shard.index >= shard.total) {
    throw ConfigError("bad shard '" + std::string(text) + "', expected i/N with 0 <= i < N");
  }
  return shard;
}

std::vector<std::size_t> shard_indices(std::size_t count, Shard shard) {
  std::vector<std::size_t> out;
  for (std::size_t i = shard.index; i < count; i += shard.total) out.push_back(i);
  return out;
}

void RunConfig::validate() const {
  if (shard.total == 0 || shard.index >= shard.total) {
    throw ConfigError("shard index must satisfy 0 <= index < total");
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (verbosity < 0 || verbosity > 2) throw ConfigError("verbosity must be 0, 1 or 2");
  if (style.max_line_length < 1) throw ConfigError("max_line_length must be >= 1");
  if (retry.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  validate_specs(scoring.specs);
}

namespace {

using Value = std::variant<std::string, double, bool, std::vector<std::string>>;

class DocParser {
 public:
  DocParser(std::string_view line, std::size_t number) : line_(line), number_(number) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(number_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }
  [[nodiscard]] bool at_end_or_comment() {
    skip_ws();
    return pos_ >= line_.size() || line_[pos_] == '#';
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string quoted() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < line_.size() && line_[pos_] != '"') {
      char c = line_[pos_++];
      if (c == '\\') {
        if (pos_ >= line_.size()) fail("unterminated escape");
        const char e = line_[pos_++];
        c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
      }
      out.push_back(c);
    }
    if (pos_ >= line_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string key() {
    skip_ws();
    if (pos_ < line_.size() && line_[pos_] == '"') return quoted();
    const auto start = pos_;
    while (pos_ < line_.size()) {
      const char c = line_[pos_];
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '_' || c == '-' || c == '.';
      if (!ok) break;
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(line_.substr(start, pos_ - start));
  }

  std::string section() {
    const auto close = line_.find(']', pos_);
    if (close == std::string_view::npos) fail("unterminated section header");
    std::string name(line_.substr(pos_ + 1, close - pos_ - 1));
    pos_ = close + 1;
    if (!at_end_or_comment()) fail("trailing text after section header");
    return name;
  }

  Value value() {
    skip_ws();
    if (pos_ >= line_.size()) fail("missing value");
    const char c = line_[pos_];
    if (c == '"') return quoted();
    if (c == '[') {
      ++pos_;
      std::vector<std::string> items;
      if (consume(']')) return items;
      for (;;) {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != '"') fail("arrays hold quoted strings only");
        items.push_back(quoted());
        if (consume(']')) return items;
        if (!consume(',')) fail("expected ',' or ']' in array");
      }
    }
    const auto start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' && line_[pos_] != '#') {
      ++pos_;
    }
    const std::string_view word = line_.substr(start, pos_ - start);
    if (word == "true") return true;
    if (word == "false") return false;
    double number = 0.0;
    std::istringstream in{std::string(word)};
    if (!(in >> number) || !in.eof()) fail("cannot parse value '" + std::string(word) + "'");
    return number;
  }

  std::size_t pos_{0};

 private:
  std::string_view line_;
  std::size_t number_;
};

struct Entry {
  std::string section;
  std::string key;
  Value value;
  std::size_t line;
};

class Applier {
 public:
  explicit Applier(RunConfig& config) : config_(config) {}

  void apply(const Entry& e) {
    entry_ = &e;
    if (e.section == "run") {
      run_key(e);
    } else if (e.section.starts_with("weights.")) {
      weight_key(e, e.section.substr(8));
    } else if (e.section == "polarity") {
      auto& spec = spec_for(e.key);
      const auto p = str();
      if (p == "benefit") spec.polarity = Polarity::Benefit;
      else if (p == "cost") spec.polarity = Polarity::Cost;
      else fail("polarity must be \"benefit\" or \"cost\"");
    } else if (e.section == "extensions") {
      const auto lang = str();
      if (!e.key.starts_with('.')) fail("extension keys start with '.'");
      if (lang == "c") config_.extensions.languages[e.key] = Language::C;
      else if (lang == "cpp") config_.extensions.languages[e.key] = Language::CPP;
      else if (lang == "none") config_.extensions.languages.erase(e.key);
      else fail("extension language must be \"c\", \"cpp\" or \"none\"");
    } else if (e.section == "style.rules") {
      style_key(e);
    } else if (e.section == "security.rules") {
      security_key(e);
    } else {
      fail("unknown section [" + e.section + "]");
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(entry_->line) + " (" + entry_->key +
                      "): " + what);
  }
  [[nodiscard]] std::string str() const {
    if (const auto* s = std::get_if<std::string>(&entry_->value)) return *s;
    fail("expected a string");
  }
  [[nodiscard]] double num() const {
    if (const auto* d = std::get_if<double>(&entry_->value)) return *d;
    fail("expected a number");
  }
  [[nodiscard]] std::size_t count() const {
    const double d = num();
    if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
      fail("expected a non-negative integer");
    }
    return static_cast<std::size_t>(d);
  }
  [[nodiscard]] bool flag() const {
    if (const auto* b = std::get_if<bool>(&entry_->value)) return *b;
    fail("expected true or false");
  }
  [[nodiscard]] const std::vector<std::string>& list() const {
    if (const auto* v = std::get_if<std::vector<std::string>>(&entry_->value)) return *v;
    fail("expected an array of strings");
  }

  MeasureSpec& spec_for(const std::string& key) {
    const auto m = measure_from_slug(key);
    if (!m) fail("unknown measure");
    for (auto& spec : config_.scoring.specs) {
      if (spec.id == *m) return spec;
    }
    fail("measure missing from the measure table");
  }

  void run_key(const Entry& e) {
    const auto& k = e.key;
    if (k == "input") config_.input = str();
    else if (k == "workdir") config_.workdir = str();
    else if (k == "metrics") config_.metrics_dir = str();
    else if (k == "csv") config_.csv_out = str();
    else if (k == "html") config_.html_out = str();
    else if (k == "shard") config_.shard = parse_shard(str());
    else if (k == "jobs") config_.jobs = static_cast<unsigned>(count());
    else if (k == "verbosity") config_.verbosity = static_cast<int>(count());
    else if (k == "fixtures") config_.fixtures = std::filesystem::path(str());
    else if (k == "api_base_url") config_.api_base_url = str();
    else if (k == "max_retries") config_.retry.max_retries = static_cast<int>(count());
    else if (k == "degenerate_score") {
      const double d = num();
      if (d < 0.0 || d > 100.0) fail("degenerate_score must be in [0, 100]");
      config_.scoring.degenerate = d;
    } else if (k == "evaluated_at") {
      const auto t = parse_timestamp(str());
      if (!t) fail("bad timestamp");
      config_.evaluated_at = *t;
    } else {
      fail("unknown key in [run]");
    }
  }

  void weight_key(const Entry& e, std::string_view category) {
    auto& spec = spec_for(e.key);
    if (to_string(spec.category) != category) {
      fail("measure does not belong to category '" + std::string(category) + "'");
    }
    spec.weight = num();
  }

  void style_key(const Entry& e) {
    if (e.key == "max_line_length") {
      config_.style.max_line_length = count();
    } else if (e.key.starts_with("pattern.")) {
      config_.style.add_pattern_rule(e.key.substr(8), str());
    } else {
      config_.style.set_enabled(e.key, flag());
    }
  }

  void security_key(const Entry& e) {
    if (e.key == "remove") {
      for (const auto& name : list()) config_.security.remove(name);
      return;
    }
    Severity sev{};
    if (e.key == "high") sev = Severity::High;
    else if (e.key == "medium") sev = Severity::Medium;
    else if (e.key == "low") sev = Severity::Low;
    else fail("expected high, medium, low or remove");
    for (const auto& name : list()) config_.security.add(SecurityRule{name, sev, "configured"});
  }

  RunConfig& config_;
  const Entry* entry_{nullptr};
};

bool known_section(std::string_view name) {
  return name == "run" || name == "polarity" || name == "extensions" || name == "style.rules" ||
         name == "security.rules" || name == "weights.quality" ||
         name == "weights.maintainability" || name == "weights.popularity";
}

}  // namespace

void apply_config_text(RunConfig& config, std::string_view text) {
  std::vector<Entry> entries;
  std::string section;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    ++number;
    if (line.ends_with('\r')) line.remove_suffix(1);
    DocParser p(line, number);
    if (!p.at_end_or_comment()) {
      if (line[p.pos_] == '[') {
        section = p.section();
        if (!known_section(section)) p.fail("unknown section [" + section + "]");
      } else {
        Entry e{section, p.key(), {}, number};
        if (!p.consume('=')) p.fail("expected '='");
        e.value = p.value();
        if (!p.at_end_or_comment()) p.fail("trailing text after value");
        if (section.empty()) p.fail("key outside of a section");
        entries.push_back(std::move(e));
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  Applier applier(config);
  for (const auto& e : entries) applier.apply(e);
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str());
}

}  // namespace gitrank
