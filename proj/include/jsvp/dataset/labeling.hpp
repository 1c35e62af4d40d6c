#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "jsvp/common/csv.hpp"
#include "jsvp/common/parallel.hpp"
#include "jsvp/history/diff.hpp"
#include "jsvp/history/git.hpp"
#include "jsvp/js/functions.hpp"

namespace jsvp::dataset {

struct FixRecord {
  std::string repo;  // URL or local path
  std::string fix_commit;
  std::string advisory_id;
};

// Reads fix records from CSV with columns repo, fix_commit, advisory_id.
inline std::vector<FixRecord> load_fixes(const CsvTable& t) {
  const auto repo = t.require_column("repo"), fix = t.require_column("fix_commit");
  const auto adv = t.column("advisory_id");
  std::vector<FixRecord> out;
  for (const auto& row : t.rows) {
    out.push_back({row[repo], row[fix], adv == static_cast<std::size_t>(-1) ? std::string() : row[adv]});
  }
  return out;
}

// Pre-image lines a file diff touches. A pure insertion after old line a is
// recorded as a.
struct PatchLines {
  std::set<int> deleted;
  std::set<int> inserted_after;
};

inline PatchLines patch_lines(const history::FileDiff& d) {
  PatchLines p;
  for (const auto& h : d.hunks) {
    if (h.old_count == 0) {
      p.inserted_after.insert(h.old_start);
    } else {
      for (int l : h.deleted_lines()) p.deleted.insert(l);
    }
  }
  return p;
}

// A pre-fix function is vulnerable when the patch deletes or changes one of
// its lines, or inserts code strictly inside it (after a line a with
// start <= a < end). Every enclosing function of such a line is labeled.
inline bool affected(const js::FunctionKey& fk, const PatchLines& p) {
  if (js::span_overlaps(fk, p.deleted)) return true;
  for (int a : p.inserted_after) {
    if (fk.span.start_line <= a && a < fk.span.end_line) return true;
  }
  return false;
}

struct FixLabels {
  FixRecord fix;
  std::string pre_fix_commit;
  bool empty_patch = false;
  std::vector<std::pair<js::FunctionKey, int>> functions;  // every pre-fix function and its label
};

// Labels the functions of the given pre-fix files against the patch.
inline std::vector<std::pair<js::FunctionKey, int>> label_from_fix(
    const std::map<std::string, std::vector<js::FunctionKey>>& pre_fix_functions,
    const std::vector<history::FileDiff>& patch) {
  std::map<std::string, PatchLines> touched;
  for (const auto& d : patch) {
    if (d.old_path.empty()) continue;  // new file: no pre-image
    auto lines = patch_lines(d);
    auto& t = touched[d.old_path];
    t.deleted.insert(lines.deleted.begin(), lines.deleted.end());
    t.inserted_after.insert(lines.inserted_after.begin(), lines.inserted_after.end());
  }
  std::vector<std::pair<js::FunctionKey, int>> out;
  for (const auto& [path, keys] : pre_fix_functions) {
    auto it = touched.find(path);
    for (const auto& k : keys) out.emplace_back(k, it != touched.end() && affected(k, it->second) ? 1 : 0);
  }
  return out;
}

// Labels every JavaScript function of the fix's parent revision, read
// straight from the object store.
inline FixLabels label_fix_commit(const history::GitRepo& repo, const FixRecord& fix, unsigned threads = 0) {
  FixLabels out;
  out.fix = fix;
  const auto commit = repo.resolve(fix.fix_commit);
  try {
    out.pre_fix_commit = repo.resolve(commit + "^");
  } catch (const Error&) {
    throw Error(ErrorCode::CommitNotFound, "fix commit " + fix.fix_commit + " has no parent");
  }
  const auto patch = history::parse_unified_diff(repo.diff(out.pre_fix_commit, commit));
  out.empty_patch = true;
  for (const auto& d : patch) out.empty_patch &= d.hunks.empty();

  const auto files = repo.list_js_files(out.pre_fix_commit);
  const auto blobs = repo.read_blobs(out.pre_fix_commit, files);
  std::vector<std::vector<js::FunctionKey>> keys(files.size());
  parallel_for(files.size(), threads, [&](std::size_t i) {
    if (auto it = blobs.find(files[i]); it != blobs.end()) keys[i] = js::extract_functions(it->second, files[i]);
  });
  std::map<std::string, std::vector<js::FunctionKey>> pre;
  for (std::size_t i = 0; i < files.size(); ++i) pre[files[i]] = std::move(keys[i]);
  out.functions = label_from_fix(pre, patch);
  return out;
}

inline CsvTable labels_table(const std::vector<FixLabels>& all) {
  CsvTable t;
  t.header = {"path", "qualified_name", "start_line", "end_line", "fix_commit", "pre_fix_commit", "advisory_id", "label"};
  for (const auto& fl : all) {
    for (const auto& [k, label] : fl.functions) {
      t.rows.push_back({k.file_path, k.qualified_name, std::to_string(k.span.start_line),
                        std::to_string(k.span.end_line), fl.fix.fix_commit, fl.pre_fix_commit, fl.fix.advisory_id,
                        std::to_string(label)});
    }
  }
  return t;
}

// Vulnerable keys from a labels table.
inline std::set<js::FunctionKey> vulnerable_keys(const CsvTable& t) {
  const auto path = t.require_column("path"), name = t.require_column("qualified_name"),
             start = t.require_column("start_line"), end = t.require_column("end_line"),
             label = t.require_column("label");
  std::set<js::FunctionKey> out;
  for (const auto& row : t.rows) {
    if (row[label] != "1") continue;
    js::FunctionKey k;
    k.file_path = row[path];
    k.qualified_name = row[name];
    k.span.start_line = static_cast<int>(parse_integer(row[start]));
    k.span.end_line = static_cast<int>(parse_integer(row[end]));
    out.insert(k);
  }
  return out;
}

}  // namespace jsvp::dataset
