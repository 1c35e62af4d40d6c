#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "git_fixture.hpp"
#include "jsvp/dataset/dataset.hpp"
#include "jsvp/dataset/labeling.hpp"
#include "jsvp/dataset/resample.hpp"
#include "jsvp/history/miner.hpp"
#include "jsvp/metrics/static_metrics.hpp"
#include "jsvp/dataset/split.hpp"

using namespace jsvp;
using namespace jsvp::dataset;

namespace {

js::FunctionKey key(const std::string& path, const std::string& name, int start, int end) {
  return {path, name, {start, end, 0, 1}};
}

history::FileDiff deletion(const std::string& path, int first, int count) {
  history::FileDiff d;
  d.old_path = d.new_path = path;
  history::Hunk h;
  h.old_start = first;
  h.old_count = count;
  h.new_start = first - 1;
  h.new_count = 0;
  d.hunks.push_back(h);
  return d;
}

CsvTable static_rows(const std::vector<js::FunctionKey>& keys) {
  std::vector<metrics::StaticRow> rows;
  double v = 1;
  for (const auto& k : keys) {
    metrics::StaticRow r{k, {}};
    r.metrics["McCC"] = v++;
    rows.push_back(r);
  }
  return metrics::static_table(rows);
}

CsvTable process_rows(const std::vector<js::FunctionKey>& keys) {
  std::vector<history::ProcessRow> rows;
  double v = 1;
  for (const auto& k : keys) {
    history::ProcessRow r{k, {}};
    r.metrics["NOCHG"] = v++;
    rows.push_back(r);
  }
  return history::process_table(rows);
}

}  // namespace

// ---- labeling ----

TEST(Labeling, DeletedLinesInsideSpan) {
  const auto labels = label_from_fix({{"F.js", {key("F.js", "f", 5, 20), key("F.js", "g", 22, 30)}}},
                                     {deletion("F.js", 10, 3)});
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[0].second, 1);
  EXPECT_EQ(labels[1].second, 0);
}

TEST(Labeling, OtherFileUntouched) {
  const auto labels = label_from_fix({{"F.js", {key("F.js", "f", 5, 20)}}}, {deletion("G.js", 10, 3)});
  EXPECT_EQ(labels[0].second, 0);
}

TEST(Labeling, NewFileLabelsNothing) {
  history::FileDiff d;
  d.new_path = "F.js";
  d.hunks.push_back({0, 0, 1, 30, {}, {}});
  const auto labels = label_from_fix({{"F.js", {key("F.js", "f", 5, 20)}}}, {d});
  EXPECT_EQ(labels[0].second, 0);
}

TEST(Labeling, InsertionInsideOrOnTheBoundary) {
  auto insert_after = [](int a) {
    history::FileDiff d;
    d.old_path = d.new_path = "F.js";
    d.hunks.push_back({a, 0, a + 1, 2, {}, {}});
    return d;
  };
  const std::map<std::string, std::vector<js::FunctionKey>> pre = {{"F.js", {key("F.js", "f", 5, 20)}}};
  EXPECT_EQ(label_from_fix(pre, {insert_after(5)})[0].second, 1);
  EXPECT_EQ(label_from_fix(pre, {insert_after(19)})[0].second, 1);
  EXPECT_EQ(label_from_fix(pre, {insert_after(20)})[0].second, 0);
  EXPECT_EQ(label_from_fix(pre, {insert_after(4)})[0].second, 0);
}

TEST(Labeling, EnclosingFunctionsAreAllLabeled) {
  const auto labels = label_from_fix({{"F.js", {key("F.js", "outer", 1, 40), key("F.js", "outer.inner", 10, 15)}}},
                                     {deletion("F.js", 12, 1)});
  EXPECT_EQ(labels[0].second, 1);
  EXPECT_EQ(labels[1].second, 1);
}

TEST(Labeling, MonotoneInThePatch) {
  Rng rng(5);
  std::vector<js::FunctionKey> keys;
  for (int i = 0; i < 30; ++i) {
    const int s = 1 + static_cast<int>(rng.below(200));
    keys.push_back(key("F.js", "f" + std::to_string(i), s, s + static_cast<int>(rng.below(40))));
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<history::FileDiff> small, big;
    for (int h = 0; h < 3; ++h) {
      const auto d = deletion("F.js", 1 + static_cast<int>(rng.below(240)), 1 + static_cast<int>(rng.below(4)));
      small.push_back(d);
      big.push_back(d);
    }
    big.push_back(deletion("F.js", 1 + static_cast<int>(rng.below(240)), 3));
    const auto a = label_from_fix({{"F.js", keys}}, small);
    const auto b = label_from_fix({{"F.js", keys}}, big);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(a[i].second, b[i].second);
  }
}

TEST(Labeling, FixCommitInRepository) {
  fixtures::ScratchRepo repo;
  repo.write("lib/a.js",
             "function safe() {\n  return 1;\n}\n"
             "function risky(input) {\n  var q = input;\n  return eval(q);\n}\n");
  repo.write("lib/b.js", "function other() {\n  return 2;\n}\n");
  const auto parent = repo.commit("dev@x", 100);
  repo.write("lib/a.js",
             "function safe() {\n  return 1;\n}\n"
             "function risky(input) {\n  var q = input;\n  return JSON.parse(q);\n}\n");
  const auto fix = repo.commit("dev@x", 200);
  history::GitRepo git(repo.path());
  const auto fl = label_fix_commit(git, {repo.path(), fix, "ADV-1"});
  EXPECT_EQ(fl.pre_fix_commit, parent);
  EXPECT_FALSE(fl.empty_patch);
  std::map<std::string, int> got;
  for (const auto& [k, l] : fl.functions) got[k.qualified_name] = l;
  EXPECT_EQ(got, (std::map<std::string, int>{{"safe", 0}, {"risky", 1}, {"other", 0}}));
  const auto positives = vulnerable_keys(labels_table({fl}));
  ASSERT_EQ(positives.size(), 1u);
  EXPECT_EQ(positives.begin()->qualified_name, "risky");
}

// ---- join and CSV ----

TEST(Join, MatchingRows) {
  const std::vector<js::FunctionKey> keys = {key("a.js", "f", 1, 3), key("a.js", "g", 4, 6), key("b.js", "h", 1, 9)};
  JoinReport rep;
  const auto d = join("p", static_rows(keys), process_rows(keys), {keys[1]}, &rep);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.columns.size(), 61u);
  EXPECT_EQ(d.y, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(rep.joined, 3u);
  EXPECT_TRUE(rep.missing_process.empty());
}

TEST(Join, StaticRowWithoutProcessRow) {
  JoinReport rep;
  const auto d = join("p", static_rows({key("a.js", "f", 1, 3)}), process_rows({}), {}, &rep);
  EXPECT_EQ(d.size(), 0u);
  ASSERT_EQ(rep.missing_process.size(), 1u);
  EXPECT_EQ(rep.missing_process[0].qualified_name, "f");
}

TEST(Join, DeterministicCsv) {
  const std::vector<js::FunctionKey> keys = {key("b.js", "h", 1, 9), key("a.js", "f", 1, 3)};
  const auto a = dataset_table(join("p", static_rows(keys), process_rows(keys), {})).to_string();
  const auto b = dataset_table(join("p", static_rows(keys), process_rows(keys), {})).to_string();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')).substr(0, 44), "project,path,name,start_line,end_line,CC,CCL");
}

TEST(Join, DuplicateKeyIsRejected) {
  const std::vector<js::FunctionKey> keys = {key("a.js", "f", 1, 3), key("a.js", "f", 1, 3)};
  try {
    join("p", static_rows(keys), process_rows({keys[0]}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateKey);
  }
}

TEST(DatasetCsv, RoundTripAndMissingFeature) {
  const std::vector<js::FunctionKey> keys = {key("a.js", "f", 1, 3), key("a.js", "g", 4, 6)};
  const auto d = join("p", static_rows(keys), process_rows(keys), {keys[0]});
  const auto text = dataset_table(d).to_string();
  const auto back = load_dataset(parse_csv(text));
  EXPECT_EQ(dataset_table(back).to_string(), text);

  auto t = parse_csv(text);
  t.header[t.column("HVOL")] = "Volume";
  try {
    load_dataset(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingFeature);
  }
  const auto mapped = load_dataset(t, all_feature_names(), ColumnMap::from_config(Config::parse("[columns]\nHVOL = Volume\n")));
  EXPECT_EQ(mapped.size(), 2u);
}

TEST(DatasetCsv, NonFiniteFeature) {
  auto t = dataset_table(join("p", static_rows({key("a.js", "f", 1, 3)}), process_rows({key("a.js", "f", 1, 3)}), {}));
  t.rows[0][t.column("HVOL")] = "";
  try {
    load_dataset(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteFeature);
  }
}

// ---- split ----

namespace {

std::vector<int> labels_with(std::size_t pos, std::size_t neg) {
  std::vector<int> y(pos, 1);
  y.resize(pos + neg, 0);
  return y;
}

}  // namespace

TEST(Split, TenFoldsOfTen) {
  const auto f = folds(labels_with(20, 80), 10, 3);
  ASSERT_EQ(f.size(), 10u);
  std::set<std::size_t> all;
  for (const auto& fold : f) {
    EXPECT_EQ(fold.size(), 10u);
    std::size_t pos = 0;
    for (auto i : fold) pos += i < 20;
    EXPECT_EQ(pos, 2u);
    all.insert(fold.begin(), fold.end());
  }
  EXPECT_EQ(all.size(), 100u);
}

TEST(Split, PaperSizedSplit) {
  const auto p = split(labels_with(1496, 10629), {});
  EXPECT_EQ(p.train.size(), 9700u);
  EXPECT_EQ(p.dev.size(), 1212u);
  EXPECT_EQ(p.test.size(), 1213u);
  EXPECT_EQ(largest_remainder(12125, {0.8, 0.1, 0.1}), (std::vector<std::size_t>{9700, 1212, 1213}));
  std::set<std::size_t> seen(p.train.begin(), p.train.end());
  seen.insert(p.dev.begin(), p.dev.end());
  seen.insert(p.test.begin(), p.test.end());
  EXPECT_EQ(seen.size(), 12125u);
  std::size_t pos = 0;
  for (auto i : p.test) pos += i < 1496;
  EXPECT_NEAR(static_cast<double>(pos) / 1213.0, 1496.0 / 12125.0, 0.002);
}

TEST(Split, SeededDeterminism) {
  const auto y = labels_with(30, 170);
  EXPECT_EQ(folds(y, 5, 9), folds(y, 5, 9));
  EXPECT_NE(folds(y, 5, 9), folds(y, 5, 10));
  EXPECT_EQ(split(y, {}).test, split(y, {}).test);
}

TEST(Split, FoldSizesDifferByAtMostOne) {
  for (std::size_t n : {23u, 57u, 101u}) {
    const auto f = folds(labels_with(n / 3, n - n / 3), 7, 1);
    std::size_t lo = n, hi = 0;
    for (const auto& fold : f) {
      lo = std::min(lo, fold.size());
      hi = std::max(hi, fold.size());
    }
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(Split, Errors) {
  EXPECT_THROW(folds(labels_with(3, 50), 10, 1), Error);
  try {
    folds(labels_with(3, 50), 10, 1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientClassSamples);
  }
  SplitSpec bad;
  bad.test = 0.2;
  EXPECT_THROW(bad.validate(), Error);
  bad = {};
  bad.k = 1;
  EXPECT_THROW(bad.validate(), Error);
}

// ---- resample ----

TEST(Resample, OverSamplingToHalf) {
  ResamplePlan plan{ResampleMode::Over, 0.5, false};
  const auto y = labels_with(1496, 10629);
  const auto idx = resample(y, plan, 7);
  std::size_t pos = 0;
  for (auto i : idx) pos += y[i];
  EXPECT_EQ(pos, 5314u);
  EXPECT_EQ(idx.size(), 5314u + 10629u);
}

TEST(Resample, UnderSamplingToOne) {
  ResamplePlan plan{ResampleMode::Under, 1.0, false};
  const auto y = labels_with(960, 7078);
  const auto idx = resample(y, plan, 7);
  std::size_t neg = 0;
  for (auto i : idx) neg += y[i] == 0;
  EXPECT_EQ(neg, 960u);
  EXPECT_EQ(idx.size(), 1920u);
}

TEST(Resample, MatchingRatioLeavesDataUnchanged) {
  const auto y = labels_with(50, 100);
  std::vector<std::size_t> identity(150);
  std::iota(identity.begin(), identity.end(), 0);
  EXPECT_EQ(resample(y, {ResampleMode::Over, 0.5, false}, 1), identity);
  EXPECT_EQ(resample(y, {ResampleMode::Under, 0.5, false}, 1), identity);
}

TEST(Resample, Unreachable) {
  const auto y = labels_with(60, 100);
  try {
    resample(y, {ResampleMode::Over, 0.5, false}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RatioUnreachable);
  }
  EXPECT_THROW(resample(labels_with(60, 100), {ResampleMode::Under, 0.25, false}, 1), Error);
}

TEST(Resample, RatioOfTotal) {
  const auto y = labels_with(100, 900);
  const auto idx = resample(y, {ResampleMode::Over, 0.25, true}, 1);
  std::size_t pos = 0;
  for (auto i : idx) pos += y[i];
  EXPECT_EQ(pos, 300u);  // 300 / 1200 = 0.25
}

TEST(Resample, FromConfig) {
  const auto p = ResamplePlan::from_config(Config::parse("[resample]\nmode = under\nratio = 0.75\n"));
  EXPECT_EQ(p.mode, ResampleMode::Under);
  EXPECT_EQ(p.ratio, 0.75);
  EXPECT_THROW(ResamplePlan::from_config(Config::parse("resample.mode = sideways")), Error);
}
