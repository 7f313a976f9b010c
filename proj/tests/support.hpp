// Shared helpers for unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gitrank::test {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("gitrank-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  return out + "'";
}

inline void run_git(const std::filesystem::path& dir, const std::string& args) {
  const std::string cmd = "git -C " + shell_quote(dir.string()) +
                          " -c user.name=t -c user.email=t@example.com -c commit.gpgsign=false " +
                          args + " >/dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("git failed: " + cmd);
}

/// Creates a one-commit repository holding `files` and returns its path.
inline std::filesystem::path make_git_repo(
    const std::filesystem::path& dir,
    const std::vector<std::pair<std::string, std::string>>& files) {
  std::filesystem::create_directories(dir);
  run_git(dir, "init --quiet");
  for (const auto& [name, content] : files) write_file(dir / name, content);
  run_git(dir, "add -A");
  run_git(dir, "commit --quiet --allow-empty -m init");
  return dir;
}

/// Copies a directory tree into a fresh one-commit repository.
inline std::filesystem::path make_git_repo_from(const std::filesystem::path& tree,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::filesystem::copy(tree, dir, std::filesystem::copy_options::recursive);
  run_git(dir, "init --quiet");
  run_git(dir, "add -A");
  run_git(dir, "commit --quiet --allow-empty -m init");
  return dir;
}

inline std::filesystem::path fixtures_dir() { return GITRANK_FIXTURES; }

/// Turns every e2e source tree into a local git remote under `root` and
/// returns the repository list: the trees in name order followed by one URL
/// that does not exist.
inline std::vector<std::string> make_e2e_remotes(const std::filesystem::path& root) {
  const auto trees = fixtures_dir() / "e2e" / "repos";
  std::vector<std::string> urls;
  std::vector<std::filesystem::path> dirs;
  for (const auto& owner : std::filesystem::directory_iterator(trees)) {
    for (const auto& repo : std::filesystem::directory_iterator(owner.path())) {
      dirs.push_back(repo.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    const auto rel = std::filesystem::relative(d, trees);
    make_git_repo_from(d, root / rel);
    urls.push_back("file://" + (root / rel).string());
  }
  urls.push_back("file://" + (root / "ghost" / "missing").string());
  return urls;
}

inline void write_repo_list(const std::filesystem::path& path, const std::vector<std::string>& urls) {
  std::string text = "# e2e repositories\n";
  for (const auto& u : urls) text += u + "\n";
  write_file(path, text);
}

}  // namespace gitrank::test
