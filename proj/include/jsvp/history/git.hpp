#pragma once

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "jsvp/common/csv.hpp"
#include "jsvp/common/error.hpp"

namespace jsvp::history {

inline std::string shell_quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

struct CommandResult {
  int status = 0;
  std::string out;
};

// Runs a shell command and captures stdout; stderr is discarded.
inline CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) throw Error(ErrorCode::Io, "cannot run: " + cmd);
  std::array<char, 1 << 16> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Temporary file removed on destruction.
class TempFile {
 public:
  explicit TempFile(std::string_view content) {
    std::string pattern = (std::filesystem::temp_directory_path() / "jsvp-XXXXXX").string();
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw Error(ErrorCode::Io, "cannot create temporary file");
    ::close(fd);
    path_ = pattern;
    write_file(path_, content);
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct CommitMeta {
  std::string commit_id;
  std::string parent_id;  // first parent; empty for a root commit
  std::string author_id;  // lowercased author email
  long long timestamp = 0;
};

class GitRepo {
 public:
  explicit GitRepo(std::string path) : path_(std::move(path)) {
    const auto r = run_command(git() + " rev-parse --git-dir");
    if (r.status != 0) throw Error(ErrorCode::RepoNotFound, "not a git repository: '" + path_ + "'");
  }

  const std::string& path() const { return path_; }

  // Full hash of a revision, or CommitNotFound.
  std::string resolve(const std::string& rev) const {
    const auto r = run_command(git() + " rev-parse --verify --quiet " + shell_quote(rev + "^{commit}"));
    if (r.status != 0 || r.out.empty()) throw Error(ErrorCode::CommitNotFound, "unknown commit '" + rev + "'");
    return r.out.substr(0, r.out.find('\n'));
  }

  bool is_ancestor(const std::string& ancestor, const std::string& descendant) const {
    return run_command(git() + " merge-base --is-ancestor " + shell_quote(ancestor) + " " + shell_quote(descendant))
               .status == 0;
  }

  // First-parent chain ending at `tip`, oldest first.
  std::vector<CommitMeta> first_parent_chain(const std::string& tip) const {
    const auto r = run_command(git() + " log --first-parent --reverse --format=%H%x09%P%x09%ae%x09%ct " +
                               shell_quote(tip) + " --");
    if (r.status != 0) throw Error(ErrorCode::CommitNotFound, "cannot list history of '" + tip + "'");
    std::vector<CommitMeta> out;
    std::size_t start = 0;
    while (start < r.out.size()) {
      auto end = r.out.find('\n', start);
      if (end == std::string::npos) end = r.out.size();
      const std::string line = r.out.substr(start, end - start);
      start = end + 1;
      if (line.empty()) continue;
      std::array<std::string, 4> f;
      std::size_t p = 0;
      for (int i = 0; i < 4; ++i) {
        const auto tab = i < 3 ? line.find('\t', p) : std::string::npos;
        f[i] = line.substr(p, tab == std::string::npos ? std::string::npos : tab - p);
        p = tab == std::string::npos ? line.size() : tab + 1;
      }
      CommitMeta m;
      m.commit_id = f[0];
      m.parent_id = f[1].substr(0, f[1].find(' '));
      m.author_id = f[2];
      for (auto& c : m.author_id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      m.timestamp = f[3].empty() ? 0 : std::stoll(f[3]);
      out.push_back(std::move(m));
    }
    return out;
  }

  std::string empty_tree() const {
    if (empty_tree_.empty()) {
      const auto r = run_command(git() + " hash-object -t tree --stdin < /dev/null");
      empty_tree_ = r.out.substr(0, r.out.find('\n'));
    }
    return empty_tree_;
  }

  // Zero-context diff of JavaScript files between two revisions; an empty
  // `from` diffs against the empty tree.
  std::string diff(const std::string& from, const std::string& to) const {
    const auto base = from.empty() ? empty_tree() : from;
    const auto r = run_command(git() +
                               " -c core.quotePath=false diff -U0 -M --no-color --no-ext-diff --src-prefix=a/ "
                               "--dst-prefix=b/ " +
                               shell_quote(base) + " " + shell_quote(to) + " -- '*.js'");
    if (r.status != 0) throw Error(ErrorCode::CommitNotFound, "cannot diff " + base + ".." + to);
    return r.out;
  }

  // JavaScript files of a revision.
  std::vector<std::string> list_js_files(const std::string& rev) const {
    const auto r = run_command(git() + " -c core.quotePath=false ls-tree -r -z --name-only " + shell_quote(rev));
    if (r.status != 0) throw Error(ErrorCode::CommitNotFound, "cannot list files of '" + rev + "'");
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < r.out.size()) {
      auto end = r.out.find('\0', start);
      if (end == std::string::npos) end = r.out.size();
      std::string name = r.out.substr(start, end - start);
      if (name.size() > 3 && name.compare(name.size() - 3, 3, ".js") == 0) out.push_back(std::move(name));
      start = end + 1;
    }
    return out;
  }

  // File contents at a revision, read in one batch. Unreadable entries are
  // absent from the result.
  std::map<std::string, std::string> read_blobs(const std::string& rev, const std::vector<std::string>& paths) const {
    std::map<std::string, std::string> out;
    if (paths.empty()) return out;
    std::string request;
    for (const auto& p : paths) request += rev + ":" + p + "\n";
    TempFile input(request);
    const auto r = run_command(git() + " cat-file --batch < " + shell_quote(input.path()));
    if (r.status != 0) return out;
    std::size_t pos = 0;
    for (const auto& p : paths) {
      const auto nl = r.out.find('\n', pos);
      if (nl == std::string::npos) break;
      const std::string header = r.out.substr(pos, nl - pos);
      pos = nl + 1;
      const auto sp1 = header.find(' ');
      const auto sp2 = header.find(' ', sp1 + 1);
      if (sp1 == std::string::npos || sp2 == std::string::npos || header.compare(sp1 + 1, sp2 - sp1 - 1, "blob") != 0) {
        if (header.size() >= 8 && header.compare(header.size() - 8, 8, " missing") == 0) continue;
        // non-blob object: skip its body
        if (sp2 != std::string::npos) pos += std::stoull(header.substr(sp2 + 1)) + 1;
        continue;
      }
      const auto size = std::stoull(header.substr(sp2 + 1));
      out[p] = r.out.substr(pos, size);
      pos += size + 1;
    }
    return out;
  }

 private:
  std::string path_;
  mutable std::string empty_tree_;

  std::string git() const { return "git -C " + shell_quote(path_); }
};

}  // namespace jsvp::history
