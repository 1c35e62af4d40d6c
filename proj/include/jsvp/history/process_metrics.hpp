#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "jsvp/common/error.hpp"
#include "jsvp/history/git.hpp"
#include "jsvp/js/functions.hpp"

namespace jsvp::history {

struct FunctionDelta {
  js::FunctionKey key;  // identity after the commit
  long long lineage = 0;
  double added = 0, deleted = 0, modified = 0;
  double co_changed = 0;
  bool created = false;
};

struct ProcessState {
  double total_added = 0, total_deleted = 0, total_modified = 0;
  double max_added = 0, max_deleted = 0, max_modified = 0, max_emt = 0;
  double change_commits = 0, add_commits = 0, del_commits = 0, mod_commits = 0;
  double emt_sum = 0;
  std::set<std::string> contributors;
  double contributor_changes = 0;
  std::optional<std::string> last_author;
  std::optional<long long> last_change_time;
  double time_gap_sum = 0;
};

inline constexpr std::array<std::string_view, 19> kProcessColumns = {
    "AVGNOAL", "AVGNODL", "AVGNOEMT", "AVGNOML", "AVGTBC", "CChurn", "MNOAL", "MNODL", "MNOEMT", "MNOML",
    "NOADD",   "NOCC",    "NOCHG",    "NOContr", "NODEL",  "NOMOD",  "SOADD", "SODEL", "SOMOD"};

inline std::size_t process_column(std::string_view name) {
  for (std::size_t i = 0; i < kProcessColumns.size(); ++i) {
    if (kProcessColumns[i] == name) return i;
  }
  throw Error(ErrorCode::MissingFeature, "unknown process metric '" + std::string(name) + "'");
}

struct ProcessVector {
  std::array<double, 19> values{};

  double& operator[](std::string_view name) { return values[process_column(name)]; }
  double operator[](std::string_view name) const { return values[process_column(name)]; }
};

inline void update_state(ProcessState& s, const CommitMeta& meta, const FunctionDelta& d) {
  if (s.last_change_time && meta.timestamp < *s.last_change_time) {
    throw Error(ErrorCode::OutOfOrderCommit, "commit " + meta.commit_id + " is older than the previous change");
  }
  s.change_commits += 1;
  if (d.added > 0) s.add_commits += 1;
  if (d.deleted > 0) s.del_commits += 1;
  if (d.modified > 0) s.mod_commits += 1;
  s.total_added += d.added;
  s.total_deleted += d.deleted;
  s.total_modified += d.modified;
  s.max_added = std::max(s.max_added, d.added);
  s.max_deleted = std::max(s.max_deleted, d.deleted);
  s.max_modified = std::max(s.max_modified, d.modified);
  s.max_emt = std::max(s.max_emt, d.co_changed);
  s.emt_sum += d.co_changed;
  s.contributors.insert(meta.author_id);
  if (s.last_author && *s.last_author != meta.author_id) s.contributor_changes += 1;
  if (s.last_change_time) s.time_gap_sum += static_cast<double>(meta.timestamp - *s.last_change_time);
  s.last_author = meta.author_id;
  s.last_change_time = meta.timestamp;
}

inline ProcessVector finalize(const ProcessState& s) {
  auto avg = [](double sum, double n) { return n > 0 ? sum / n : 0.0; };
  ProcessVector v;
  v["SOADD"] = s.total_added;
  v["SODEL"] = s.total_deleted;
  v["SOMOD"] = s.total_modified;
  v["CChurn"] = s.total_added - s.total_deleted;
  v["NOADD"] = s.add_commits;
  v["NODEL"] = s.del_commits;
  v["NOMOD"] = s.mod_commits;
  v["NOCHG"] = s.change_commits;
  v["AVGNOAL"] = avg(s.total_added, s.add_commits);
  v["AVGNODL"] = avg(s.total_deleted, s.del_commits);
  v["AVGNOML"] = avg(s.total_modified, s.mod_commits);
  v["AVGNOEMT"] = avg(s.emt_sum, s.change_commits);
  v["MNOAL"] = s.max_added;
  v["MNODL"] = s.max_deleted;
  v["MNOML"] = s.max_modified;
  v["MNOEMT"] = s.max_emt;
  v["NOContr"] = static_cast<double>(s.contributors.size());
  v["NOCC"] = s.contributor_changes;
  v["AVGTBC"] = s.change_commits >= 2 ? s.time_gap_sum / (s.change_commits - 1) : 0.0;
  return v;
}

}  // namespace jsvp::history
