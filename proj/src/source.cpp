#include "gitrank/source.hpp"

#include <spdlog/spdlog.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include "gitrank/errors.hpp"
#include "gitrank/lexer.hpp"
#include "process.hpp"

namespace fs = std::filesystem;

namespace gitrank {

std::string_view to_string(Language lang) { return lang == Language::C ? "C" : "CPP"; }

ExtensionMap ExtensionMap::defaults() {
  ExtensionMap map;
  map.languages = {{".c", Language::C},     {".h", Language::C},     {".cc", Language::CPP},
                   {".cpp", Language::CPP}, {".cxx", Language::CPP}, {".hpp", Language::CPP},
                   {".hh", Language::CPP},  {".hxx", Language::CPP}};
  map.sibling_headers = {".h"};
  return map;
}

std::optional<Language> ExtensionMap::lookup(const fs::path& path) const {
  const auto it = languages.find(path.extension().string());
  if (it == languages.end()) return std::nullopt;
  return it->second;
}

LineCounts& LineCounts::operator+=(const LineCounts& other) {
  total += other.total;
  source += other.source;
  comment_only += other.comment_only;
  blank += other.blank;
  return *this;
}

std::vector<LineKind> classify_lines(std::string_view text) {
  return classify_lines(text, tokenize(text));
}

std::vector<LineKind> classify_lines(std::string_view text, std::span<const Token> tokens) {
  if (text.empty()) return {};
  std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  if (text.back() != '\n') ++lines;

  std::vector<bool> code(lines, false);
  std::vector<bool> comment(lines, false);
  for (const Token& tok : tokens) {
    if (tok.kind == TokenKind::Whitespace) continue;
    auto& marks = tok.kind == TokenKind::Comment ? comment : code;
    const std::size_t last = std::min(tok.end_line(), lines);
    for (std::size_t l = tok.line; l <= last; ++l) marks[l - 1] = true;
  }

  std::vector<LineKind> kinds(lines, LineKind::Blank);
  for (std::size_t i = 0; i < lines; ++i) {
    if (code[i]) {
      kinds[i] = LineKind::Source;
    } else if (comment[i]) {
      kinds[i] = LineKind::CommentOnly;
    }
  }
  return kinds;
}

LineCounts count_lines(std::string_view text) {
  LineCounts counts;
  for (const LineKind kind : classify_lines(text)) {
    ++counts.total;
    switch (kind) {
      case LineKind::Source: ++counts.source; break;
      case LineKind::CommentOnly: ++counts.comment_only; break;
      case LineKind::Blank: ++counts.blank; break;
    }
  }
  return counts;
}

std::vector<SourceFile> discover_files(const fs::path& root, const ExtensionMap& extensions) {
  std::vector<SourceFile> files;
  std::set<fs::path> cpp_dirs;
  std::error_code ec;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    spdlog::warn("cannot list {}: {}", root.string(), ec.message());
    return files;
  }
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      spdlog::warn("skipping unreadable entry under {}: {}", root.string(), ec.message());
      ec.clear();
      continue;
    }
    const fs::directory_entry& entry = *it;
    if (entry.path().filename() == ".git") {
      it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(ec)) continue;
    const auto lang = extensions.lookup(entry.path());
    if (!lang) continue;
    fs::path rel = entry.path().lexically_relative(root);
    if (*lang == Language::CPP) cpp_dirs.insert(rel.parent_path());
    files.push_back(SourceFile{std::move(rel), *lang});
  }
  for (auto& file : files) {
    if (extensions.sibling_headers.contains(file.path.extension().string()) &&
        cpp_dirs.contains(file.path.parent_path())) {
      file.language = Language::CPP;
    }
  }
  std::sort(files.begin(), files.end(), [](const SourceFile& a, const SourceFile& b) {
    return a.path.generic_string() < b.path.generic_string();
  });
  return files;
}

std::optional<std::string> read_source_text(const fs::path& path) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) {
    spdlog::warn("skipping {}: {}", path.string(), ec.message());
    return std::nullopt;
  }
  if (size > kMaxSourceBytes) {
    spdlog::warn("skipping {}: {} bytes exceeds the {} byte limit", path.string(), size,
                 kMaxSourceBytes);
    return std::nullopt;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    spdlog::warn("skipping {}: cannot open", path.string());
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = std::move(buf).str();
  if (text.find('\0') != std::string::npos) {
    spdlog::warn("skipping {}: binary content", path.string());
    return std::nullopt;
  }
  return text;
}

std::string repo_name_from_url(std::string_view url) {
  std::string_view path = url;
  while (!path.empty() && (path.back() == '/' || path.back() == ' ')) path.remove_suffix(1);
  if (path.ends_with(".git")) path.remove_suffix(4);

  if (const auto scheme = path.find("://"); scheme != std::string_view::npos) {
    const std::string_view name = path.substr(0, scheme);
    path.remove_prefix(scheme + 3);
    if (name != "file") {
      const auto slash = path.find('/');
      path = slash == std::string_view::npos ? std::string_view{} : path.substr(slash);
    }
  } else if (const auto colon = path.find(':');
             colon != std::string_view::npos && path.find('/') > colon) {
    path.remove_prefix(colon + 1);  // scp-like git@host:owner/repo
  }

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto part = path.substr(start, slash == std::string_view::npos ? path.npos
                                                                         : slash - start);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  if (parts.size() < 2) throw InvalidUrl("cannot derive owner/repo from '" + std::string(url) + "'");
  const auto owner = parts[parts.size() - 2];
  const auto repo = parts.back();
  for (const auto part : {owner, repo}) {
    if (part == "." || part == "..") {
      throw InvalidUrl("unsupported path component '" + std::string(part) + "' in " +
                       std::string(url));
    }
  }
  return std::string(owner) + "/" + std::string(repo);
}

std::string repo_dir_name(std::string_view name) {
  std::string dir(name);
  if (const auto slash = dir.find('/'); slash != std::string::npos) dir.replace(slash, 1, "__");
  return dir;
}

namespace {

std::optional<std::string> head_commit_of(const fs::path& work_tree) {
  // Without this check a plain directory nested in another checkout would
  // report the enclosing repository's HEAD.
  std::error_code ec;
  if (!fs::exists(work_tree / ".git", ec)) return std::nullopt;
  const auto res = detail::run_process({"git", "-C", work_tree.string(), "rev-parse", "HEAD"});
  if (res.exit_code != 0) return std::nullopt;
  std::string sha = res.output;
  while (!sha.empty() && (sha.back() == '\n' || sha.back() == '\r')) sha.pop_back();
  if (sha.size() != 40) return std::nullopt;
  return sha;
}

std::string first_line(const std::string& text) {
  auto line = text.substr(0, text.find('\n'));
  return line.empty() ? "no output" : line;
}

}  // namespace

RepoSource clone_or_open(std::string_view url, const fs::path& workdir) {
  RepoSource repo;
  repo.url = std::string(url);
  repo.name = repo_name_from_url(url);
  repo.local_path = workdir / repo_dir_name(repo.name);

  std::error_code ec;
  if (!fs::exists(repo.local_path, ec)) {
    fs::create_directories(workdir, ec);
    if (ec) throw CloneFailed("cannot create workdir " + workdir.string() + ": " + ec.message());
    static std::atomic<unsigned> counter{0};
    fs::path staging = repo.local_path;
    staging += ".partial-" + std::to_string(getpid()) + "-" + std::to_string(counter++);
    const auto res = detail::run_process(
        {"git", "clone", "--quiet", "--single-branch", "--no-recurse-submodules", repo.url,
         staging.string()});
    if (res.exit_code != 0) {
      fs::remove_all(staging, ec);
      throw CloneFailed("git clone " + repo.url + " failed: " + first_line(res.output));
    }
    fs::rename(staging, repo.local_path, ec);
    if (ec) {
      // Lost a race with another worker cloning the same URL; keep theirs.
      fs::remove_all(staging, ec);
    }
  }

  auto sha = head_commit_of(repo.local_path);
  if (!sha) {
    throw CloneFailed(repo.local_path.string() + " is not a git work tree with a checked-out HEAD");
  }
  repo.head_commit = std::move(*sha);
  return repo;
}

std::vector<std::string> read_repo_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read repository list " + path.string());
  std::vector<std::string> urls;
  std::string line;
  while (std::getline(in, line)) {
    // `#` starts a comment at line start or after whitespace.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    urls.push_back(line.substr(b, e - b + 1));
  }
  return urls;
}

}  // namespace gitrank
