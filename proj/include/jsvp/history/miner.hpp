#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/common/csv.hpp"
#include "jsvp/common/parallel.hpp"
#include "jsvp/history/diff.hpp"
#include "jsvp/history/git.hpp"
#include "jsvp/history/identity.hpp"
#include "jsvp/history/process_metrics.hpp"
#include "jsvp/js/functions.hpp"

namespace jsvp::history {

struct MinerOptions {
  IdentityOptions identity;
  unsigned threads = 0;

  static MinerOptions from_config(const Config& cfg) {
    MinerOptions o;
    o.identity.threshold = cfg.get_number("history.similarity_threshold", o.identity.threshold);
    o.identity.min_tokens = static_cast<std::size_t>(cfg.get_number("history.min_body_tokens", 10));
    o.threads = static_cast<unsigned>(cfg.get_number("run.threads", 0));
    if (o.identity.threshold < 0 || o.identity.threshold > 1) {
      throw Error(ErrorCode::Config, "history.similarity_threshold must lie in [0, 1]");
    }
    return o;
  }
};

struct CommitRecord {
  CommitMeta meta;
  std::vector<FunctionDelta> deltas;  // ordered by lineage
};

struct MinerDiagnostic {
  std::string commit;
  std::string path;
  std::string message;
};

struct ProcessRow {
  js::FunctionKey key;
  ProcessVector metrics;
};

struct HistoryResult {
  std::vector<CommitRecord> commits;
  std::vector<ProcessRow> rows;  // functions of the last processed revision
  std::vector<MinerDiagnostic> diagnostics;
};

// Functions of one file at the current revision, in preorder, with the
// lineage each one belongs to.
struct TrackedFile {
  std::vector<FunctionShape> shapes;
  std::vector<long long> lineage;

  // Innermost function whose span holds `line`, or -1.
  int at_line(int line) const {
    int best = -1;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      const auto& s = shapes[i].key.span;
      if (s.start_line <= line && line <= s.end_line) best = static_cast<int>(i);
    }
    return best;
  }
};

// Incremental miner: feed commits oldest first.
class HistoryMiner {
 public:
  explicit HistoryMiner(MinerOptions opt = {}) : opt_(opt) {}

  // Applies one commit given its first-parent diff and the post-image text
  // of every file the diff names (missing entries are unreadable blobs).
  CommitRecord apply(CommitMeta meta, const std::vector<FileDiff>& diffs,
                     const std::map<std::string, std::string>& post_images) {
    if (last_time_ && meta.timestamp < *last_time_) meta.timestamp = *last_time_;
    last_time_ = meta.timestamp;

    std::vector<const FileDiff*> work;
    for (const auto& d : diffs) {
      if (!d.binary) work.push_back(&d);
    }
    std::vector<std::optional<js::Inventory>> post(work.size());
    parallel_for(work.size(), opt_.threads, [&](std::size_t i) {
      const auto& path = work[i]->new_path;
      if (path.empty()) return;
      if (auto it = post_images.find(path); it != post_images.end()) post[i] = js::extract_inventory(it->second, path);
    });

    std::map<long long, FunctionDelta> deltas;
    auto touch = [&](long long lineage, const js::FunctionKey& key) -> FunctionDelta& {
      auto [it, fresh] = deltas.try_emplace(lineage);
      if (fresh) {
        it->second.lineage = lineage;
        it->second.key = key;
      }
      return it->second;
    };

    std::map<std::string, TrackedFile> replaced;
    std::vector<std::string> removed;
    for (std::size_t w = 0; w < work.size(); ++w) {
      const auto& d = *work[w];
      TrackedFile pre;
      if (!d.old_path.empty()) {
        if (auto it = files_.find(d.old_path); it != files_.end()) pre = it->second;
        removed.push_back(d.old_path);
      }
      TrackedFile next;
      std::vector<int> successor(pre.shapes.size(), -1);
      if (!d.new_path.empty()) {
        if (!post[w]) {
          diagnostics_.push_back({meta.commit_id, d.new_path, "UnreadableBlob: file skipped"});
          continue;
        }
        for (const auto& diag : post[w]->diagnostics) {
          diagnostics_.push_back({meta.commit_id, d.new_path,
                                  diag.code + " at " + std::to_string(diag.line) + ":" + std::to_string(diag.col)});
        }
        next.shapes = function_shapes(*post[w]);
        const auto match = track_identity(pre.shapes, next.shapes, opt_.identity);
        for (std::size_t j = 0; j < next.shapes.size(); ++j) {
          if (match[j] >= 0) {
            next.lineage.push_back(pre.lineage[match[j]]);
            successor[match[j]] = static_cast<int>(j);
          } else {
            next.lineage.push_back(next_lineage_++);
            touch(next.lineage.back(), next.shapes[j].key).created = true;
          }
        }
      }

      for (const auto& h : d.hunks) {
        const int paired = std::min(h.old_count, h.new_count);
        for (int j = 0; j < h.new_count; ++j) {
          const int f = next.at_line(h.new_start + j);
          if (f < 0) continue;
          auto& delta = touch(next.lineage[f], next.shapes[f].key);
          (j < paired ? delta.modified : delta.added) += 1;
        }
        for (int j = paired; j < h.old_count; ++j) {
          const int f = pre.at_line(h.old_start + j);
          if (f < 0) continue;
          const int s = successor[f];
          touch(pre.lineage[f], s >= 0 ? next.shapes[s].key : pre.shapes[f].key).deleted += 1;
        }
      }
      if (!d.new_path.empty()) replaced[d.new_path] = std::move(next);
    }
    for (const auto& p : removed) files_.erase(p);
    for (auto& [p, t] : replaced) files_[p] = std::move(t);

    CommitRecord rec;
    rec.meta = meta;
    const double others = deltas.empty() ? 0.0 : static_cast<double>(deltas.size() - 1);
    for (auto& [lineage, delta] : deltas) {
      delta.co_changed = others;
      update_state(states_[lineage], meta, delta);
      rec.deltas.push_back(delta);
    }
    return rec;
  }

  // Process metrics of every function currently in the tree.
  std::vector<ProcessRow> rows() const {
    std::vector<ProcessRow> out;
    for (const auto& [path, file] : files_) {
      for (std::size_t i = 0; i < file.shapes.size(); ++i) {
        auto it = states_.find(file.lineage[i]);
        out.push_back({file.shapes[i].key, it == states_.end() ? ProcessVector{} : finalize(it->second)});
      }
    }
    std::sort(out.begin(), out.end(), [](const ProcessRow& a, const ProcessRow& b) { return a.key < b.key; });
    return out;
  }

  const std::vector<MinerDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  MinerOptions opt_;
  std::map<std::string, TrackedFile> files_;
  std::map<long long, ProcessState> states_;
  long long next_lineage_ = 0;
  std::optional<long long> last_time_;
  std::vector<MinerDiagnostic> diagnostics_;
};

// Walks the first-parent chain from the root to `until` (default HEAD).
inline HistoryResult walk_history(const std::string& repo_path, const std::optional<std::string>& until = std::nullopt,
                                  const MinerOptions& opt = {}) {
  GitRepo repo(repo_path);
  const auto head = repo.resolve("HEAD");
  std::string tip = head;
  if (until) {
    tip = repo.resolve(*until);
    if (!repo.is_ancestor(tip, head)) {
      throw Error(ErrorCode::CommitNotFound, "commit '" + *until + "' is not reachable from HEAD");
    }
  }
  HistoryMiner miner(opt);
  HistoryResult result;
  for (const auto& meta : repo.first_parent_chain(tip)) {
    const auto diffs = parse_unified_diff(repo.diff(meta.parent_id, meta.commit_id));
    std::vector<std::string> paths;
    for (const auto& d : diffs) {
      if (!d.binary && !d.new_path.empty()) paths.push_back(d.new_path);
    }
    const auto blobs = repo.read_blobs(meta.commit_id, paths);
    result.commits.push_back(miner.apply(meta, diffs, blobs));
  }
  result.rows = miner.rows();
  result.diagnostics = miner.diagnostics();
  return result;
}

inline std::vector<std::string> process_csv_header() {
  std::vector<std::string> h = {"path", "qualified_name", "start_line", "end_line"};
  for (auto c : kProcessColumns) h.emplace_back(c);
  return h;
}

inline CsvTable process_table(const std::vector<ProcessRow>& rows) {
  CsvTable t;
  t.header = process_csv_header();
  for (const auto& r : rows) {
    std::vector<std::string> line = {r.key.file_path, r.key.qualified_name, std::to_string(r.key.span.start_line),
                                     std::to_string(r.key.span.end_line)};
    for (double x : r.metrics.values) line.push_back(format_number(x));
    t.rows.push_back(std::move(line));
  }
  return t;
}

}  // namespace jsvp::history
