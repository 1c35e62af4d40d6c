#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jsvp/common/error.hpp"

namespace jsvp::history {

struct Hunk {
  int old_start = 0, old_count = 0;
  int new_start = 0, new_count = 0;
  std::vector<std::string> removed;
  std::vector<std::string> added;

  // 1-based pre-image lines deleted by the hunk.
  std::vector<int> deleted_lines() const {
    std::vector<int> out;
    for (int i = 0; i < old_count; ++i) out.push_back(old_start + i);
    return out;
  }
  std::vector<int> added_lines() const {
    std::vector<int> out;
    for (int i = 0; i < new_count; ++i) out.push_back(new_start + i);
    return out;
  }
};

struct FileDiff {
  std::string old_path;  // empty when the file is new
  std::string new_path;  // empty when the file is deleted
  bool binary = false;
  std::vector<Hunk> hunks;
};

namespace detail {

// Undoes git's C-style quoting of unusual path names.
inline std::string unquote_path(std::string_view s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::string(s);
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c != '\\' || i + 2 >= s.size()) {
      out += c;
      continue;
    }
    c = s[++i];
    switch (c) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case 'a': out += '\a'; break;
      case 'b': out += '\b'; break;
      case 'f': out += '\f'; break;
      case 'v': out += '\v'; break;
      default:
        if (c >= '0' && c <= '7' && i + 2 < s.size()) {
          out += static_cast<char>(((c - '0') << 6) | ((s[i + 1] - '0') << 3) | (s[i + 2] - '0'));
          i += 2;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string strip_prefix(std::string path, std::string_view prefix) {
  if (path == "/dev/null") return {};
  if (path.compare(0, prefix.size(), prefix) == 0) path.erase(0, prefix.size());
  return path;
}

inline void parse_range(std::string_view text, int& start, int& count) {
  const auto comma = text.find(',');
  start = std::stoi(std::string(text.substr(0, comma)));
  count = comma == std::string_view::npos ? 1 : std::stoi(std::string(text.substr(comma + 1)));
}

inline bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

}  // namespace detail

// Parses `git diff` output produced with a/ and b/ prefixes.
inline std::vector<FileDiff> parse_unified_diff(std::string_view text) {
  std::vector<FileDiff> files;
  FileDiff* cur = nullptr;
  Hunk* hunk = nullptr;
  int rem_old = 0, rem_new = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;

    using detail::starts_with;
    if (starts_with(line, "diff --git ")) {
      files.emplace_back();
      cur = &files.back();
      hunk = nullptr;
      rem_old = rem_new = 0;
      // Fallback paths for hunk-less entries (pure renames, mode changes).
      const auto rest = line.substr(11);
      if (rest.size() % 2 == 1) {
        const auto half = rest.size() / 2;
        cur->old_path = detail::strip_prefix(detail::unquote_path(rest.substr(0, half)), "a/");
        cur->new_path = detail::strip_prefix(detail::unquote_path(rest.substr(half + 1)), "b/");
      }
      continue;
    }
    if (!cur) continue;
    if (!line.empty() && line[0] == '\\') continue;  // "\ No newline at end of file"
    if (hunk && (rem_old > 0 || rem_new > 0)) {
      // hunk bodies are consumed by count so content like "-- x" is not a header
      if (!line.empty() && line[0] == '-' && rem_old > 0) {
        hunk->removed.emplace_back(line.substr(1));
        --rem_old;
        continue;
      }
      if (!line.empty() && line[0] == '+' && rem_new > 0) {
        hunk->added.emplace_back(line.substr(1));
        --rem_new;
        continue;
      }
      if (!line.empty() && line[0] == ' ') {
        --rem_old;
        --rem_new;
        continue;
      }
    }
    if (starts_with(line, "@@ ")) {
      const auto close = line.find(" @@", 3);
      if (close == std::string_view::npos) throw Error(ErrorCode::Parse, "bad hunk header: " + std::string(line));
      const auto ranges = line.substr(3, close - 3);
      const auto space = ranges.find(' ');
      if (ranges.empty() || ranges[0] != '-' || space == std::string_view::npos || ranges[space + 1] != '+') {
        throw Error(ErrorCode::Parse, "bad hunk header: " + std::string(line));
      }
      cur->hunks.emplace_back();
      hunk = &cur->hunks.back();
      detail::parse_range(ranges.substr(1, space - 1), hunk->old_start, hunk->old_count);
      detail::parse_range(ranges.substr(space + 2), hunk->new_start, hunk->new_count);
      rem_old = hunk->old_count;
      rem_new = hunk->new_count;
    } else if (starts_with(line, "--- ")) {
      cur->old_path = detail::strip_prefix(detail::unquote_path(line.substr(4)), "a/");
    } else if (starts_with(line, "+++ ")) {
      cur->new_path = detail::strip_prefix(detail::unquote_path(line.substr(4)), "b/");
    } else if (starts_with(line, "rename from ")) {
      cur->old_path = detail::unquote_path(line.substr(12));
    } else if (starts_with(line, "rename to ")) {
      cur->new_path = detail::unquote_path(line.substr(10));
    } else if (starts_with(line, "new file mode")) {
      cur->old_path.clear();
    } else if (starts_with(line, "deleted file mode")) {
      cur->new_path.clear();
    } else if (starts_with(line, "Binary files ")) {
      cur->binary = true;
    }
  }
  return files;
}

}  // namespace jsvp::history
