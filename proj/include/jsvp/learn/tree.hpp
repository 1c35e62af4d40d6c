#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "jsvp/common/rng.hpp"
#include "jsvp/learn/classifier.hpp"
#include "jsvp/learn/params.hpp"

namespace jsvp::learn {

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0;
  int left = -1, right = -1;
  double value = 0;  // fraction of positive training samples
};

struct TreeOptions {
  int max_depth = 0;  // 0: unlimited
  int min_samples_split = 2;
  std::size_t max_features = 0;  // 0: every feature, in column order
};

// CART with Gini impurity. Samples with x <= threshold go left.
class CartTree {
 public:
  std::vector<TreeNode> nodes;

  void fit(const Matrix& X, const std::vector<int>& y, std::vector<std::size_t> idx, const TreeOptions& opt, Rng* rng) {
    nodes.clear();
    X_ = &X;
    y_ = &y;
    opt_ = opt;
    rng_ = rng;
    build(idx, 0);
    X_ = nullptr;
    y_ = nullptr;
  }

  double score(std::span<const double> x) const {
    int n = 0;
    while (nodes[n].feature >= 0) n = x[nodes[n].feature] <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
    return nodes[n].value;
  }

  Json save() const {
    Json out = Json::array();
    for (const auto& n : nodes) out.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    return out;
  }

  void load(const Json& j) {
    nodes.clear();
    for (const auto& e : j) nodes.push_back({e.at(0).get<int>(), e.at(1).get<double>(), e.at(2).get<int>(), e.at(3).get<int>(), e.at(4).get<double>()});
  }

 private:
  const Matrix* X_ = nullptr;
  const std::vector<int>* y_ = nullptr;
  TreeOptions opt_;
  Rng* rng_ = nullptr;

  struct Split {
    int feature = -1;
    double threshold = 0;
    double impurity = 0;
  };

  static double gini(double pos, double n) {
    if (n <= 0) return 0;
    const double p = pos / n;
    return 1.0 - p * p - (1 - p) * (1 - p);
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> f(X_->cols);
    std::iota(f.begin(), f.end(), 0);
    if (opt_.max_features == 0 || opt_.max_features >= f.size() || rng_ == nullptr) return f;
    for (std::size_t i = 0; i < opt_.max_features; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_->below(f.size() - i));
      std::swap(f[i], f[j]);
    }
    f.resize(opt_.max_features);
    std::sort(f.begin(), f.end());
    return f;
  }

  Split best_split(const std::vector<std::size_t>& idx, double pos) {
    Split best;
    best.impurity = std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(idx.size());
    std::vector<std::pair<double, int>> col(idx.size());
    for (auto f : candidate_features()) {
      for (std::size_t i = 0; i < idx.size(); ++i) col[i] = {(*X_)(idx[i], f), (*y_)[idx[i]]};
      std::sort(col.begin(), col.end());
      double left_pos = 0;
      for (std::size_t i = 0; i + 1 < col.size(); ++i) {
        left_pos += col[i].second;
        if (!(col[i].first < col[i + 1].first)) continue;
        const double nl = static_cast<double>(i + 1);
        const double imp = nl * gini(left_pos, nl) + (n - nl) * gini(pos - left_pos, n - nl);
        if (imp < best.impurity) {
          double t = col[i].first + (col[i + 1].first - col[i].first) / 2;
          if (!(t < col[i + 1].first)) t = col[i].first;
          best = {static_cast<int>(f), t, imp};
        }
      }
    }
    return best;
  }

  int build(const std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    double pos = 0;
    for (auto i : idx) pos += (*y_)[i];
    nodes[id].value = idx.empty() ? 0.0 : pos / static_cast<double>(idx.size());
    const bool pure = pos == 0 || pos == static_cast<double>(idx.size());
    if (pure || static_cast<int>(idx.size()) < opt_.min_samples_split || (opt_.max_depth > 0 && depth >= opt_.max_depth)) {
      return id;
    }
    const auto s = best_split(idx, pos);
    if (s.feature < 0) return id;
    std::vector<std::size_t> left, right;
    for (auto i : idx) ((*X_)(i, s.feature) <= s.threshold ? left : right).push_back(i);
    nodes[id].feature = s.feature;
    nodes[id].threshold = s.threshold;
    const int l = build(left, depth + 1);
    nodes[id].left = l;
    const int r = build(right, depth + 1);
    nodes[id].right = r;
    return id;
  }
};

class DecisionTree : public Classifier {
 public:
  explicit DecisionTree(const Params& p) {
    opt_.max_depth = static_cast<int>(int_param(p, "max_depth"));
    opt_.min_samples_split = static_cast<int>(int_param(p, "min_samples_split"));
  }

  void fit(const Matrix& X, const std::vector<int>& y, const FitContext&) override {
    std::vector<std::size_t> idx(X.rows);
    std::iota(idx.begin(), idx.end(), 0);
    tree_.fit(X, y, idx, opt_, nullptr);
  }

  std::vector<double> scores(const Matrix& X) const override {
    std::vector<double> out;
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(tree_.score(X.row(r)));
    return out;
  }

  Json save() const override { return {{"tree", tree_.save()}}; }
  void load(const Json& j) override { tree_.load(j.at("tree")); }

 private:
  TreeOptions opt_;
  CartTree tree_;
};

inline std::size_t resolve_max_features(const std::string& spec, std::size_t d) {
  if (spec == "all") return d;
  if (spec == "sqrt") return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
  if (spec == "log2") return std::max<std::size_t>(1, static_cast<std::size_t>(std::log2(static_cast<double>(d))));
  const double v = parse_number(spec, "max_features");
  if (v < 1) return std::max<std::size_t>(1, static_cast<std::size_t>(v * static_cast<double>(d)));
  return std::min(d, static_cast<std::size_t>(v));
}

// Bagged CART trees; each tree casts one vote and the score is the share of
// positive votes.
class RandomForest : public Classifier {
 public:
  explicit RandomForest(const Params& p)
      : n_trees_(static_cast<int>(int_param(p, "n_trees"))), max_features_(p.at("max_features")),
        bootstrap_(parse_bool(p.at("bootstrap"))) {
    opt_.max_depth = static_cast<int>(int_param(p, "max_depth"));
    opt_.min_samples_split = static_cast<int>(int_param(p, "min_samples_split"));
  }

  void fit(const Matrix& X, const std::vector<int>& y, const FitContext& ctx) override {
    auto opt = opt_;
    opt.max_features = resolve_max_features(max_features_, X.cols);
    if (opt.max_features >= X.cols) opt.max_features = 0;
    trees_.assign(static_cast<std::size_t>(n_trees_), {});
    for (int t = 0; t < n_trees_; ++t) {
      Rng rng(mix_seed(ctx.seed, static_cast<std::uint64_t>(t)));
      std::vector<std::size_t> idx(X.rows);
      if (bootstrap_) {
        for (auto& i : idx) i = static_cast<std::size_t>(rng.below(X.rows));
      } else {
        std::iota(idx.begin(), idx.end(), 0);
      }
      trees_[static_cast<std::size_t>(t)].fit(X, y, std::move(idx), opt, &rng);
    }
  }

  std::vector<double> scores(const Matrix& X) const override {
    std::vector<double> out;
    for (std::size_t r = 0; r < X.rows; ++r) {
      int votes = 0;
      for (const auto& t : trees_) votes += t.score(X.row(r)) >= 0.5;
      out.push_back(static_cast<double>(votes) / static_cast<double>(trees_.size()));
    }
    return out;
  }

  Json save() const override {
    Json trees = Json::array();
    for (const auto& t : trees_) trees.push_back(t.save());
    return {{"trees", trees}};
  }

  void load(const Json& j) override {
    trees_.clear();
    for (const auto& t : j.at("trees")) {
      trees_.emplace_back();
      trees_.back().load(t);
    }
  }

 private:
  int n_trees_;
  std::string max_features_;
  bool bootstrap_;
  TreeOptions opt_;
  std::vector<CartTree> trees_;
};

}  // namespace jsvp::learn
