#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gitrank/lexer.hpp"

namespace gitrank {

enum class Language { C, CPP };

std::string_view to_string(Language lang);

/// Extension (with leading dot, case-sensitive) to language.
///
/// Extensions listed in `sibling_headers` (default: ".h") are tagged C unless
/// their directory also holds a file of a CPP extension.
struct ExtensionMap {
  std::map<std::string, Language> languages;
  std::set<std::string> sibling_headers;

  static ExtensionMap defaults();
  [[nodiscard]] std::optional<Language> lookup(const std::filesystem::path& path) const;
};

struct LineCounts {
  std::size_t total{0};
  std::size_t source{0};
  std::size_t comment_only{0};
  std::size_t blank{0};

  LineCounts& operator+=(const LineCounts& other);
  bool operator==(const LineCounts&) const = default;
};

enum class LineKind { Source, CommentOnly, Blank };

/// Per physical line classification; element i describes line i + 1.
std::vector<LineKind> classify_lines(std::string_view text);
/// Same, reusing `tokens == tokenize(text)`.
std::vector<LineKind> classify_lines(std::string_view text, std::span<const Token> tokens);

/// Line categories of a C/C++ file. Code followed by a trailing comment counts
/// as source; interior lines of a block comment count as comment-only.
LineCounts count_lines(std::string_view text);

struct SourceFile {
  std::filesystem::path path;  ///< relative to the repository root
  Language language{Language::C};
};

/// Every regular file under `root` with a mapped extension, `.git` excluded,
/// sorted by generic path string.
std::vector<SourceFile> discover_files(const std::filesystem::path& root,
                                       const ExtensionMap& extensions);

inline constexpr std::size_t kMaxSourceBytes = 1U << 20;

/// Reads a source file for analysis. Returns nullopt (and logs) for files over
/// kMaxSourceBytes, unreadable files, and binary files (NUL bytes).
std::optional<std::string> read_source_text(const std::filesystem::path& path);

struct RepoSource {
  std::string url;
  std::string name;  ///< "owner/repo"
  std::filesystem::path local_path;
  std::string head_commit;  ///< 40 hex digits
};

/// "owner/repo" from https, ssh (git@host:owner/repo.git) or file URLs.
/// Throws InvalidUrl when fewer than two path components are present.
std::string repo_name_from_url(std::string_view url);

/// Working-copy directory name: "owner/repo" -> "owner__repo".
std::string repo_dir_name(std::string_view name);

/// Reuses `<workdir>/<owner>__<repo>` when it already holds a work tree
/// (no network access), otherwise clones the default branch into it.
/// HEAD is pinned at call time. Throws CloneFailed.
RepoSource clone_or_open(std::string_view url, const std::filesystem::path& workdir);

/// One URL per line; blank lines and `#` comments are ignored.
std::vector<std::string> read_repo_list(const std::filesystem::path& path);

}  // namespace gitrank
