#pragma once

// A scripted repository whose per-function changes are known by
// construction. Every body line and closing line is unique, so git's diff of
// each commit is unambiguous and the expected added/deleted/modified counts
// can be written down while editing.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "git_fixture.hpp"
#include "jsvp/common/rng.hpp"
#include "jsvp/history/process_metrics.hpp"
#include "jsvp/js/functions.hpp"

namespace jsvp::fixtures {

// One change to one function: author, time, added, deleted, modified, others
// touched in the same commit.
using ModelChange = std::tuple<std::string, long long, double, double, double, double>;

// Process metrics recomputed from a function's complete change list.
inline history::ProcessVector brute_force_metrics(const std::vector<ModelChange>& changes) {
  history::ProcessVector v;
  const double n = static_cast<double>(changes.size());
  double soadd = 0, sodel = 0, somod = 0, noadd = 0, nodel = 0, nomod = 0, emt = 0;
  double mal = 0, mdl = 0, mml = 0, memt = 0, nocc = 0;
  std::set<std::string> authors;
  for (std::size_t i = 0; i < changes.size(); ++i) {
    const auto& [author, time, a, d, m, co] = changes[i];
    soadd += a;
    sodel += d;
    somod += m;
    noadd += a > 0;
    nodel += d > 0;
    nomod += m > 0;
    emt += co;
    mal = std::max(mal, a);
    mdl = std::max(mdl, d);
    mml = std::max(mml, m);
    memt = std::max(memt, co);
    authors.insert(author);
    if (i > 0 && std::get<0>(changes[i - 1]) != author) ++nocc;
  }
  v["SOADD"] = soadd;
  v["SODEL"] = sodel;
  v["SOMOD"] = somod;
  v["CChurn"] = soadd - sodel;
  v["NOADD"] = noadd;
  v["NODEL"] = nodel;
  v["NOMOD"] = nomod;
  v["NOCHG"] = n;
  v["AVGNOAL"] = noadd ? soadd / noadd : 0;
  v["AVGNODL"] = nodel ? sodel / nodel : 0;
  v["AVGNOML"] = nomod ? somod / nomod : 0;
  v["AVGNOEMT"] = n ? emt / n : 0;
  v["MNOAL"] = mal;
  v["MNODL"] = mdl;
  v["MNOML"] = mml;
  v["MNOEMT"] = memt;
  v["NOContr"] = static_cast<double>(authors.size());
  v["NOCC"] = nocc;
  v["AVGTBC"] = n >= 2 ? static_cast<double>(std::get<1>(changes.back()) - std::get<1>(changes.front())) / (n - 1) : 0;
  return v;
}

struct ExpectedRow {
  js::FunctionKey key;
  history::ProcessVector metrics;
};

class HistoryModel {
 public:
  explicit HistoryModel(ScratchRepo& repo) : repo_(repo) {}

  // New function at the end of `path` with `lines` body lines.
  void create(const std::string& path, const std::string& name, int lines) {
    Fn f{name, {}, fresh(), next_lineage_++};
    for (int i = 0; i < lines; ++i) f.body.push_back(line());
    pending_[f.lineage].added += lines + 2;
    files_[path].push_back(f);
    dirty_.insert(path);
  }
  void append(const std::string& path, const std::string& name, int k) {
    auto& f = find(path, name);
    for (int i = 0; i < k; ++i) f.body.push_back(line());
    pending_[f.lineage].added += k;
    dirty_.insert(path);
  }
  void remove_lines(const std::string& path, const std::string& name, std::size_t at, int k) {
    auto& f = find(path, name);
    f.body.erase(f.body.begin() + static_cast<long>(at), f.body.begin() + static_cast<long>(at) + k);
    pending_[f.lineage].deleted += k;
    dirty_.insert(path);
  }
  void replace(const std::string& path, const std::string& name, std::size_t at, int k) {
    auto& f = find(path, name);
    for (int i = 0; i < k; ++i) f.body[at + static_cast<std::size_t>(i)] = line();
    pending_[f.lineage].modified += k;
    dirty_.insert(path);
  }
  void rename(const std::string& path, const std::string& name, const std::string& to) {
    auto& f = find(path, name);
    f.name = to;
    pending_[f.lineage].modified += 1;
    dirty_.insert(path);
  }
  void remove(const std::string& path, const std::string& name) {
    auto& fns = files_.at(path);
    auto it = std::find_if(fns.begin(), fns.end(), [&](const Fn& f) { return f.name == name; });
    pending_[it->lineage].deleted += static_cast<double>(it->body.size() + 2);
    fns.erase(it);
    dirty_.insert(path);
  }
  // A pure rename; commit it on its own.
  void move(const std::string& from, const std::string& to) {
    repo_.move(from, to);
    files_[to] = files_.at(from);
    files_.erase(from);
  }

  void commit(const std::string& author, long long time) {
    flush();
    repo_.commit(author, time);
    record(pending_, author, time);
    pending_.clear();
  }

  // Commits on a side branch are only seen through the merge commit.
  void start_side(const std::string& branch) { repo_.git("checkout -q -b " + branch); }
  void commit_side(const std::string& author, long long time) {
    flush();
    repo_.commit(author, time);
    for (const auto& [l, d] : pending_) side_[l] += d;
    pending_.clear();
  }
  // Back on main the side branch's files revert on disk; only files edited
  // afterwards are rewritten.
  void back_to_main() { repo_.git("checkout -q main"); }
  void merge(const std::string& branch, const std::string& author, long long time) {
    repo_.merge(branch, author, time);
    record(side_, author, time);
    side_.clear();
  }

  const std::map<std::string, std::vector<std::string>> names() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [p, fns] : files_) {
      for (const auto& f : fns) out[p].push_back(f.name);
    }
    return out;
  }
  std::size_t body_size(const std::string& path, const std::string& name) const {
    for (const auto& f : files_.at(path)) {
      if (f.name == name) return f.body.size();
    }
    return 0;
  }

  std::vector<ExpectedRow> expected() const {
    std::vector<ExpectedRow> out;
    for (const auto& [path, fns] : files_) {
      int ln = 1;
      for (const auto& f : fns) {
        js::FunctionKey key;
        key.file_path = path;
        key.qualified_name = f.name;
        key.span.start_line = ln;
        key.span.end_line = ln + static_cast<int>(f.body.size()) + 1;
        ln = key.span.end_line + 2;
        auto it = log_.find(f.lineage);
        out.push_back({key, it == log_.end() ? history::ProcessVector{} : brute_force_metrics(it->second)});
      }
    }
    std::sort(out.begin(), out.end(), [](const ExpectedRow& a, const ExpectedRow& b) { return a.key < b.key; });
    return out;
  }

 private:
  struct Fn {
    std::string name;
    std::vector<std::string> body;
    int closer = 0;
    long long lineage = 0;
  };
  struct Delta {
    double added = 0, deleted = 0, modified = 0;
  };
  friend Delta& operator+=(Delta& a, const Delta& b) {
    a.added += b.added;
    a.deleted += b.deleted;
    a.modified += b.modified;
    return a;
  }

  ScratchRepo& repo_;
  std::map<std::string, std::vector<Fn>> files_;
  std::set<std::string> dirty_;
  std::map<long long, Delta> pending_, side_;
  std::map<long long, std::vector<ModelChange>> log_;
  long long next_lineage_ = 0;
  int counter_ = 0;

  int fresh() { return ++counter_; }
  std::string line() { return "  v = v + " + std::to_string(fresh()) + ";"; }

  Fn& find(const std::string& path, const std::string& name) {
    for (auto& f : files_.at(path)) {
      if (f.name == name) return f;
    }
    throw std::runtime_error("no function " + name + " in " + path);
  }

  std::string render(const std::vector<Fn>& fns) const {
    std::string out;
    for (std::size_t i = 0; i < fns.size(); ++i) {
      if (i) out += "\n";
      out += "function " + fns[i].name + "(v) {\n";
      for (const auto& l : fns[i].body) out += l + "\n";
      out += "} // " + std::to_string(fns[i].closer) + "\n";
    }
    return out;
  }

  void flush() {
    for (const auto& p : dirty_) {
      const auto& fns = files_.at(p);
      if (fns.empty()) {
        repo_.remove(p);
        files_.erase(p);
      } else {
        repo_.write(p, render(fns));
      }
    }
    dirty_.clear();
  }

  void record(const std::map<long long, Delta>& deltas, const std::string& author, long long time) {
    const double others = deltas.empty() ? 0 : static_cast<double>(deltas.size() - 1);
    for (const auto& [l, d] : deltas) log_[l].emplace_back(author, time, d.added, d.deleted, d.modified, others);
  }
};

// A random history over two to four files: body edits, creations, removals,
// function renames, file moves and a merge from a side branch. At most one
// identity-changing edit touches a file per commit, so similarity matching
// never has to choose between candidates.
inline void random_history(HistoryModel& m, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> authors = {"ann@example.com", "bob@example.com", "cy@example.com"};
  long long t = 1000000 + static_cast<long long>(rng.below(1000));
  int names = 0;
  auto name = [&] { return "fn" + std::to_string(names++); };
  const auto files = 2 + rng.below(3);
  for (std::uint64_t f = 0; f < files; ++f) {
    const auto path = "src/f" + std::to_string(f) + ".js";
    for (std::uint64_t k = 0, n = 1 + rng.below(3); k < n; ++k) m.create(path, name(), 3 + static_cast<int>(rng.below(4)));
  }
  m.commit(authors[rng.below(3)], t);
  int moved = 0;
  bool merged = false;

  auto body_edit = [&](const std::string& path, const std::string& fn) {
    const auto size = m.body_size(path, fn);
    switch (rng.below(3)) {
      case 0: m.append(path, fn, 1 + static_cast<int>(rng.below(3))); break;
      case 1:
        if (size > 4) {
          const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(size - 3, 3)));
          m.remove_lines(path, fn, rng.below(size - static_cast<std::size_t>(k) + 1), k);
          break;
        }
        [[fallthrough]];
      default: {
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(size, 3)));
        m.replace(path, fn, rng.below(size - static_cast<std::size_t>(k) + 1), k);
      }
    }
  };

  for (std::uint64_t step = 0, steps = 4 + rng.below(4); step < steps; ++step) {
    t += 1 + static_cast<long long>(rng.below(5000));
    const auto layout = m.names();
    const auto roll = rng.below(10);
    if (roll == 0) {
      const auto& from = std::next(layout.begin(), static_cast<long>(rng.below(layout.size())))->first;
      m.move(from, "lib/moved" + std::to_string(moved++) + ".js");
      m.commit(authors[rng.below(3)], t);
      continue;
    }
    if (roll == 1 && !merged) {
      merged = true;
      const auto& side_file = layout.begin()->first;
      const auto& main_file = std::next(layout.begin())->first;
      m.start_side("side");
      // One edit per function; adjacent edits of one function could merge
      // into a hunk that pairs differently.
      const auto& side_fns = layout.at(side_file);
      for (std::size_t i = 0; i < side_fns.size(); ++i) {
        if (i == 0 || rng.below(2)) body_edit(side_file, side_fns[i]);
      }
      m.commit_side(authors[rng.below(3)], t);
      m.back_to_main();
      t += 1 + static_cast<long long>(rng.below(100));
      for (const auto& fn : layout.at(main_file)) body_edit(main_file, fn);
      m.commit(authors[rng.below(3)], t);
      t += 1 + static_cast<long long>(rng.below(100));
      m.merge("side", authors[rng.below(3)], t);
      continue;
    }
    bool any = false;
    for (const auto& [path, fns] : layout) {
      bool identity_edit = false;
      std::set<std::string> edited;
      for (const auto& fn : fns) {
        if (rng.below(10) >= 4) continue;
        any = true;
        edited.insert(fn);
        if (!identity_edit && rng.below(5) == 0) {
          identity_edit = true;
          m.rename(path, fn, name());
        } else {
          body_edit(path, fn);
        }
      }
      if (identity_edit) continue;
      const auto r = rng.below(10);
      if (r == 0) {
        m.create(path, name(), 3 + static_cast<int>(rng.below(4)));
        any = true;
      } else if (r == 1 && fns.size() > 1) {
        // Only an untouched function may go.
        const auto& victim = fns[rng.below(fns.size())];
        if (!edited.count(victim)) {
          m.remove(path, victim);
          any = true;
        }
      }
    }
    if (!any) body_edit(layout.begin()->first, layout.begin()->second.front());
    m.commit(authors[rng.below(3)], t);
  }
}

}  // namespace jsvp::fixtures
