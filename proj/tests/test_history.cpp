#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "git_fixture.hpp"
#include "history_model.hpp"
#include "jsvp/common/rng.hpp"
#include "jsvp/history/miner.hpp"

using namespace jsvp;
using namespace jsvp::history;

namespace {

const std::string kTenLines =
    "function f(a) {\n"
    "  var b = a;\n"
    "  b = b + 1;\n"
    "  b = b + 2;\n"
    "  b = b + 3;\n"
    "  b = b + 4;\n"
    "  b = b + 5;\n"
    "  b = b + 6;\n"
    "  return b;\n"
    "}\n";

const ProcessRow& row(const HistoryResult& r, const std::string& name) {
  for (const auto& x : r.rows) {
    if (x.key.qualified_name == name) return x;
  }
  throw std::runtime_error("no row " + name);
}

const FunctionDelta& delta(const CommitRecord& c, const std::string& name) {
  for (const auto& d : c.deltas) {
    if (d.key.qualified_name == name) return d;
  }
  throw std::runtime_error("no delta " + name);
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

// Non-incremental recomputation of the process metrics from the whole list
// of (author, time, added, deleted, modified, co_changed) changes.
using Change = std::tuple<std::string, long long, double, double, double, double>;

ProcessVector batch_metrics(const std::vector<Change>& changes) {
  ProcessVector v;
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

}  // namespace

// ---- diff parsing ----

TEST(Diff, ParsesHunksAndPaths) {
  const std::string text =
      "diff --git a/src/x.js b/src/x.js\n"
      "index 1111111..2222222 100644\n"
      "--- a/src/x.js\n"
      "+++ b/src/x.js\n"
      "@@ -3,2 +3,3 @@ function f() {\n"
      "-  a();\n"
      "--- b();\n"
      "+  c();\n"
      "+  d();\n"
      "+  e();\n"
      "@@ -10 +11,0 @@\n"
      "-  gone();\n"
      "\\ No newline at end of file\n"
      "diff --git a/new.js b/new.js\n"
      "new file mode 100644\n"
      "--- /dev/null\n"
      "+++ b/new.js\n"
      "@@ -0,0 +1 @@\n"
      "+x;\n"
      "diff --git a/old.js b/old.js\n"
      "deleted file mode 100644\n"
      "--- a/old.js\n"
      "+++ /dev/null\n"
      "@@ -1 +0,0 @@\n"
      "-y;\n"
      "diff --git a/p.js b/q.js\n"
      "similarity index 100%\n"
      "rename from p.js\n"
      "rename to q.js\n";
  const auto files = parse_unified_diff(text);
  ASSERT_EQ(files.size(), 4u);
  EXPECT_EQ(files[0].old_path, "src/x.js");
  EXPECT_EQ(files[0].new_path, "src/x.js");
  ASSERT_EQ(files[0].hunks.size(), 2u);
  const auto& h = files[0].hunks[0];
  EXPECT_EQ(std::tie(h.old_start, h.old_count, h.new_start, h.new_count), std::make_tuple(3, 2, 3, 3));
  EXPECT_EQ(h.removed, (std::vector<std::string>{"  a();", "-- b();"}));
  EXPECT_EQ(h.added.size(), 3u);
  EXPECT_EQ(files[0].hunks[1].old_count, 1);
  EXPECT_EQ(files[0].hunks[1].new_count, 0);
  EXPECT_EQ(files[0].hunks[1].new_start, 11);
  EXPECT_EQ(files[1].old_path, "");
  EXPECT_EQ(files[1].new_path, "new.js");
  EXPECT_EQ(files[2].old_path, "old.js");
  EXPECT_EQ(files[2].new_path, "");
  EXPECT_EQ(files[3].old_path, "p.js");
  EXPECT_EQ(files[3].new_path, "q.js");
  EXPECT_TRUE(files[3].hunks.empty());
}

TEST(Diff, QuotedPaths) {
  const auto files = parse_unified_diff(
      "diff --git \"a/sp ace\\t.js\" \"b/sp ace\\t.js\"\n--- \"a/sp ace\\t.js\"\n+++ \"b/sp ace\\t.js\"\n@@ -1 +1 @@\n-a\n+b\n");
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].new_path, "sp ace\t.js");
}

// ---- state update and finalize ----

TEST(ProcessState, ThreeCommitExample) {
  ProcessState s;
  FunctionDelta d;
  d.added = 10;
  update_state(s, {"c1", "", "alice", 0}, d);
  d = {};
  d.modified = 2;
  update_state(s, {"c2", "c1", "bob", 100}, d);
  d = {};
  d.added = 3;
  update_state(s, {"c3", "c2", "alice", 300}, d);
  const auto v = finalize(s);
  EXPECT_EQ(v["NOCHG"], 3);
  EXPECT_EQ(v["NOContr"], 2);
  EXPECT_EQ(v["NOCC"], 2);
  EXPECT_EQ(v["SOADD"], 13);
  EXPECT_EQ(v["SOMOD"], 2);
  EXPECT_EQ(v["SODEL"], 0);
  EXPECT_EQ(v["CChurn"], 13);
  EXPECT_EQ(v["MNOAL"], 10);
  EXPECT_DOUBLE_EQ(v["AVGNOAL"], 6.5);
  EXPECT_EQ(v["NOADD"], 2);
  EXPECT_EQ(v["NOMOD"], 1);
  EXPECT_DOUBLE_EQ(v["AVGTBC"], 150);
  EXPECT_EQ(v.values, batch_metrics({{"alice", 0, 10, 0, 0, 0}, {"bob", 100, 0, 0, 2, 0}, {"alice", 300, 3, 0, 0, 0}}).values);
}

TEST(ProcessState, SingleCommitAndSameAuthor) {
  ProcessState s;
  FunctionDelta d;
  d.added = 4;
  update_state(s, {"c1", "", "a@x", 50}, d);
  auto v = finalize(s);
  EXPECT_EQ(v["NOCHG"], 1);
  EXPECT_EQ(v["NOCC"], 0);
  EXPECT_EQ(v["AVGTBC"], 0);
  update_state(s, {"c2", "c1", "a@x", 60}, d);
  EXPECT_EQ(finalize(s)["NOCC"], 0);
}

TEST(ProcessState, ZeroDenominators) {
  ProcessState s;
  FunctionDelta d;
  d.deleted = 2;
  update_state(s, {"c1", "", "a", 1}, d);
  const auto v = finalize(s);
  EXPECT_EQ(v["NOADD"], 0);
  EXPECT_EQ(v["AVGNOAL"], 0);
  EXPECT_EQ(v["MNOAL"], 0);
  EXPECT_EQ(v["AVGNODL"], 2);
  EXPECT_EQ(v["CChurn"], -2);
}

TEST(ProcessState, OutOfOrderCommitIsRejected) {
  ProcessState s;
  update_state(s, {"c1", "", "a", 100}, {});
  try {
    update_state(s, {"c2", "c1", "a", 99}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfOrderCommit);
  }
}

TEST(ProcessState, IncrementalEqualsBatch) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 1 + rng.below(12);
    std::vector<Change> changes;
    ProcessState s;
    long long t = static_cast<long long>(rng.below(1000));
    for (std::uint64_t i = 0; i < n; ++i) {
      t += static_cast<long long>(rng.below(500));
      Change c{"dev" + std::to_string(rng.below(3)), t, double(rng.below(3) ? rng.below(20) : 0),
               double(rng.below(2) ? rng.below(20) : 0), double(rng.below(2) ? rng.below(5) : 0),
               double(rng.below(4))};
      changes.push_back(c);
      FunctionDelta d;
      d.added = std::get<2>(c);
      d.deleted = std::get<3>(c);
      d.modified = std::get<4>(c);
      d.co_changed = std::get<5>(c);
      update_state(s, {"c" + std::to_string(i), "", std::get<0>(c), t}, d);
    }
    const auto inc = finalize(s);
    const auto bat = batch_metrics(changes);
    for (std::size_t k = 0; k < inc.values.size(); ++k) {
      EXPECT_NEAR(inc.values[k], bat.values[k], 1e-9) << kProcessColumns[k];
    }
    EXPECT_EQ(inc["CChurn"], inc["SOADD"] - inc["SODEL"]);
    EXPECT_LE(inc["NOCC"], inc["NOCHG"] - 1);
    EXPECT_LE(inc["NOContr"], inc["NOCHG"]);
    EXPECT_GE(inc["MNOEMT"], inc["AVGNOEMT"]);
    if (inc["NOADD"] > 0) {
      EXPECT_GE(inc["MNOAL"], inc["AVGNOAL"]);
    }
  }
}

// ---- identity ----

namespace {

std::vector<FunctionShape> shapes(const std::string& src) {
  return function_shapes(js::extract_inventory(src, "f.js"));
}

// Independent trigram Jaccard over normalized lexemes.
double trigram_oracle(const std::string& a, const std::string& b) {
  auto grams = [](const std::string& src) {
    const auto inv = js::extract_inventory(src);
    const auto& f = inv.functions.at(0);
    std::vector<std::string> t;
    for (auto p = f.body_begin; p < f.body_end; ++p) t.push_back(metrics::normalized_lexeme(inv.sig(p), true));
    std::set<std::vector<std::string>> out;
    for (std::size_t i = 0; i + 2 < t.size(); ++i) out.insert({t[i], t[i + 1], t[i + 2]});
    return out;
  };
  const auto ga = grams(a), gb = grams(b);
  std::size_t common = 0;
  for (const auto& g : ga) common += gb.count(g);
  return double(common) / double(ga.size() + gb.size() - common);
}

}  // namespace

TEST(Identity, UnchangedFileMapsToItself) {
  const std::string src = kTenLines + "function g() { return 1; }\n";
  EXPECT_EQ(track_identity(shapes(src), shapes(src)), (std::vector<int>{0, 1}));
}

TEST(Identity, RenameWithIdenticalBody) {
  const auto prev = shapes(kTenLines);
  const auto next = shapes(replace(kTenLines, "function f", "function renamed"));
  EXPECT_DOUBLE_EQ(jaccard(prev[0].trigrams, next[0].trigrams), 1.0);
  EXPECT_EQ(track_identity(prev, next), (std::vector<int>{0}));
}

TEST(Identity, UnrelatedFunctionDoesNotMatch) {
  const std::string other =
      "function h(list) {\n  for (const item of list) {\n    if (item.ok) { send(item.id, true); }\n  }\n  return list.length;\n}\n";
  const double sim = trigram_oracle(kTenLines, other);
  EXPECT_LT(sim, 0.8);
  EXPECT_NEAR(jaccard(shapes(kTenLines)[0].trigrams, shapes(other)[0].trigrams), sim, 1e-12);
  EXPECT_EQ(track_identity(shapes(kTenLines), shapes(other)), (std::vector<int>{-1}));
}

TEST(Identity, TinyBodiesMatchByNameOnly) {
  EXPECT_EQ(track_identity(shapes("function a() { return 1; }"), shapes("function b() { return 1; }")),
            (std::vector<int>{-1}));
  EXPECT_EQ(track_identity(shapes("function a() { return 1; }"), shapes("function a() { return 2; }")),
            (std::vector<int>{0}));
}

// ---- mining real repositories ----

TEST(Miner, RootCommitCreatesFunction) {
  fixtures::ScratchRepo repo;
  repo.write("src/f.js", kTenLines);
  repo.commit("Alice@Example.com", 1000);
  const auto r = walk_history(repo.path());
  ASSERT_EQ(r.commits.size(), 1u);
  ASSERT_EQ(r.commits[0].deltas.size(), 1u);
  const auto& d = r.commits[0].deltas[0];
  EXPECT_EQ(d.key.qualified_name, "f");
  EXPECT_EQ(d.key.file_path, "src/f.js");
  EXPECT_TRUE(d.created);
  EXPECT_EQ(d.added, 10);
  EXPECT_EQ(d.deleted, 0);
  EXPECT_EQ(d.modified, 0);
  EXPECT_EQ(r.commits[0].meta.author_id, "alice@example.com");
}

TEST(Miner, ThreeCommitHistory) {
  fixtures::ScratchRepo repo;
  repo.write("f.js", kTenLines);
  repo.commit("alice@x", 0);
  auto v2 = replace(replace(kTenLines, "b = b + 1;", "b = b * 1;"), "b = b + 2;", "b = b * 2;");
  repo.write("f.js", v2);
  repo.commit("bob@x", 100);
  repo.write("f.js", replace(v2, "  return b;\n", "  b++;\n  b++;\n  b++;\n  return b;\n"));
  repo.commit("alice@x", 300);
  const auto r = walk_history(repo.path());
  ASSERT_EQ(r.commits.size(), 3u);
  const auto& d2 = delta(r.commits[1], "f");
  EXPECT_EQ(d2.modified, 2);
  EXPECT_EQ(d2.added, 0);
  EXPECT_EQ(d2.deleted, 0);
  const auto& v = row(r, "f").metrics;
  EXPECT_EQ(v["NOCHG"], 3);
  EXPECT_EQ(v["NOContr"], 2);
  EXPECT_EQ(v["NOCC"], 2);
  EXPECT_EQ(v["SOADD"], 13);
  EXPECT_EQ(v["SOMOD"], 2);
  EXPECT_EQ(v["SODEL"], 0);
  EXPECT_EQ(v["CChurn"], 13);
  EXPECT_EQ(v["MNOAL"], 10);
  EXPECT_DOUBLE_EQ(v["AVGNOAL"], 6.5);
  EXPECT_EQ(v["NOADD"], 2);
  EXPECT_EQ(v["NOMOD"], 1);
  EXPECT_DOUBLE_EQ(v["AVGTBC"], 150);
}

TEST(Miner, CoChangedFunctions) {
  fixtures::ScratchRepo repo;
  repo.write("a.js", "function f() {\n  return 1;\n}\nfunction g() {\n  return 2;\n}\nfunction h() {\n  return 3;\n}\n");
  repo.commit("a@x", 10);
  repo.write("a.js", "function f() {\n  return 10;\n}\nfunction g() {\n  return 20;\n}\nfunction h() {\n  return 3;\n}\n");
  repo.commit("a@x", 20);
  const auto r = walk_history(repo.path());
  ASSERT_EQ(r.commits[1].deltas.size(), 2u);
  EXPECT_EQ(delta(r.commits[1], "f").co_changed, 1);
  EXPECT_EQ(delta(r.commits[1], "g").co_changed, 1);
  EXPECT_EQ(row(r, "h").metrics["NOCHG"], 1);
  EXPECT_EQ(row(r, "f").metrics["MNOEMT"], 2);  // creation commit touched three
}

TEST(Miner, DeletedLinesAndUntil) {
  fixtures::ScratchRepo repo;
  repo.write("f.js", kTenLines);
  const auto first = repo.commit("a@x", 10);
  repo.write("f.js", replace(replace(kTenLines, "  b = b + 5;\n", ""), "  b = b + 6;\n", ""));
  repo.commit("b@x", 20);
  const auto full = walk_history(repo.path());
  EXPECT_EQ(delta(full.commits[1], "f").deleted, 2);
  EXPECT_EQ(row(full, "f").metrics["SODEL"], 2);
  EXPECT_EQ(row(full, "f").metrics["CChurn"], 8);
  EXPECT_EQ(row(full, "f").key.span.end_line, 8);

  const auto partial = walk_history(repo.path(), first);
  EXPECT_EQ(partial.commits.size(), 1u);
  EXPECT_EQ(row(partial, "f").metrics["NOCHG"], 1);
}

TEST(Miner, RenamedFunctionKeepsHistory) {
  fixtures::ScratchRepo repo;
  repo.write("f.js", kTenLines);
  repo.commit("a@x", 10);
  repo.write("f.js", replace(kTenLines, "function f", "function better"));
  repo.commit("b@x", 20);
  const auto r = walk_history(repo.path());
  const auto& v = row(r, "better").metrics;
  EXPECT_EQ(v["NOCHG"], 2);
  EXPECT_EQ(v["NOContr"], 2);
  EXPECT_EQ(v["NOMOD"], 1);
}

TEST(Miner, MovedFileKeepsHistory) {
  fixtures::ScratchRepo repo;
  repo.write("old/f.js", kTenLines);
  repo.commit("a@x", 10);
  repo.move("old/f.js", "new/f.js");
  repo.commit("a@x", 20);
  repo.write("new/f.js", replace(kTenLines, "b = b + 3;", "b = b - 3;"));
  repo.commit("a@x", 30);
  const auto r = walk_history(repo.path());
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].key.file_path, "new/f.js");
  EXPECT_EQ(r.rows[0].metrics["NOCHG"], 2);
  EXPECT_DOUBLE_EQ(r.rows[0].metrics["AVGTBC"], 20);
}

TEST(Miner, CommitterTimestampsAreMadeMonotone) {
  fixtures::ScratchRepo repo;
  repo.write("f.js", kTenLines);
  repo.commit("a@x", 500);
  repo.write("f.js", replace(kTenLines, "b = b + 3;", "b = b - 3;"));
  repo.commit("a@x", 400);  // clock skew
  const auto r = walk_history(repo.path());
  EXPECT_EQ(r.commits[1].meta.timestamp, 500);
  EXPECT_EQ(row(r, "f").metrics["AVGTBC"], 0);
}

TEST(Miner, MergeCommitSeesFirstParentDiff) {
  fixtures::ScratchRepo repo;
  repo.write("f.js", kTenLines);
  repo.commit("a@x", 10);
  repo.git("checkout -q -b side");
  repo.write("g.js", "function g() {\n  return 1;\n}\n");
  repo.commit("side@x", 20);
  repo.git("checkout -q main");
  repo.write("f.js", replace(kTenLines, "b = b + 3;", "b = b - 3;"));
  repo.commit("a@x", 30);
  repo.git("-c user.name=m -c user.email=m@x merge -q --no-edit side");
  const auto r = walk_history(repo.path());
  EXPECT_EQ(r.commits.size(), 3u);
  EXPECT_EQ(row(r, "g").metrics["NOCHG"], 1);
  EXPECT_EQ(row(r, "g").metrics["SOADD"], 3);
  EXPECT_EQ(row(r, "f").metrics["NOCHG"], 2);
}

TEST(Miner, Errors) {
  try {
    walk_history("/nonexistent/repo");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RepoNotFound);
  }
  fixtures::ScratchRepo repo;
  repo.write("f.js", kTenLines);
  repo.commit("a@x", 10);
  try {
    walk_history(repo.path(), std::string("deadbeefdeadbeef"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CommitNotFound);
  }
}

TEST(Miner, DeterministicTable) {
  fixtures::ScratchRepo repo;
  repo.write("a.js", kTenLines);
  repo.write("b.js", "const k = () => {\n  return 1;\n};\n");
  repo.commit("a@x", 10);
  repo.write("b.js", "const k = () => {\n  return 2;\n};\n");
  repo.commit("b@x", 20);
  MinerOptions one, many;
  one.threads = 1;
  many.threads = 4;
  EXPECT_EQ(process_table(walk_history(repo.path(), std::nullopt, one).rows).to_string(),
            process_table(walk_history(repo.path(), std::nullopt, many).rows).to_string());
}

TEST(Miner, GeneratedHistoriesMatchModel) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    fixtures::ScratchRepo repo;
    fixtures::HistoryModel m(repo);
    fixtures::random_history(m, seed);
    const auto got = walk_history(repo.path()).rows;
    const auto want = m.expected();
    ASSERT_EQ(got.size(), want.size()) << "seed " << seed;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(got[i].key.qualified_name, want[i].key.qualified_name) << "seed " << seed;
      EXPECT_EQ(got[i].key.span.start_line, want[i].key.span.start_line) << "seed " << seed;
      EXPECT_EQ(got[i].metrics.values, want[i].metrics.values) << "seed " << seed << " " << want[i].key.qualified_name;
    }
  }
}
