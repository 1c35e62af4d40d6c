#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "jsvp/learn/classifier.hpp"
#include "jsvp/learn/params.hpp"

namespace jsvp::learn {

// Majority label of the training set; an even split goes to 0.
class ZeroR : public Classifier {
 public:
  void fit(const Matrix&, const std::vector<int>& y, const FitContext&) override {
    std::size_t pos = 0;
    for (int v : y) pos += v == 1;
    rate_ = y.empty() ? 0.0 : static_cast<double>(pos) / static_cast<double>(y.size());
    label_ = 2 * pos > y.size() ? 1 : 0;
  }
  std::vector<double> scores(const Matrix& X) const override { return std::vector<double>(X.rows, rate_); }
  std::vector<int> predict(const Matrix& X) const override { return std::vector<int>(X.rows, label_); }
  Json save() const override { return {{"label", label_}, {"rate", rate_}}; }
  void load(const Json& j) override {
    label_ = j.at("label").get<int>();
    rate_ = j.at("rate").get<double>();
  }

 private:
  int label_ = 0;
  double rate_ = 0;
};

// Euclidean k nearest neighbours. Equal distances keep the earlier training
// row; a split vote goes to the negative class.
class Knn : public Classifier {
 public:
  explicit Knn(const Params& p) : k_(static_cast<std::size_t>(int_param(p, "k"))) {}

  void fit(const Matrix& X, const std::vector<int>& y, const FitContext&) override {
    X_ = X;
    y_ = y;
  }

  std::vector<double> scores(const Matrix& X) const override {
    std::vector<double> out;
    for (auto pos : positive_votes(X)) out.push_back(static_cast<double>(pos) / static_cast<double>(neighbours()));
    return out;
  }

  std::vector<int> predict(const Matrix& X) const override {
    std::vector<int> out;
    for (auto pos : positive_votes(X)) out.push_back(2 * pos > neighbours() ? 1 : 0);
    return out;
  }

  Json save() const override { return {{"X", X_.data}, {"cols", X_.cols}, {"y", y_}}; }
  void load(const Json& j) override {
    X_.data = j.at("X").get<std::vector<double>>();
    X_.cols = j.at("cols").get<std::size_t>();
    y_ = j.at("y").get<std::vector<int>>();
    X_.rows = y_.size();
  }

 private:
  std::size_t k_;
  Matrix X_;
  std::vector<int> y_;

  std::size_t neighbours() const { return std::min(k_, X_.rows); }

  std::vector<std::size_t> positive_votes(const Matrix& X) const {
    const auto k = neighbours();
    std::vector<std::size_t> out;
    std::vector<std::pair<double, std::size_t>> dist(X_.rows);
    for (std::size_t q = 0; q < X.rows; ++q) {
      const auto x = X.row(q);
      for (std::size_t i = 0; i < X_.rows; ++i) {
        const auto t = X_.row(i);
        double d = 0;
        for (std::size_t c = 0; c < x.size(); ++c) d += (x[c] - t[c]) * (x[c] - t[c]);
        dist[i] = {d, i};
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
      std::size_t pos = 0;
      for (std::size_t i = 0; i < k; ++i) pos += y_[dist[i].second] == 1;
      out.push_back(pos);
    }
    return out;
  }
};

// Gaussian naive Bayes. Per-class variances are floored at var_floor.
class NaiveBayes : public Classifier {
 public:
  explicit NaiveBayes(const Params& p) : floor_(real_param(p, "var_floor")) {}

  void fit(const Matrix& X, const std::vector<int>& y, const FitContext&) override {
    for (int c = 0; c < 2; ++c) {
      mean_[c].assign(X.cols, 0.0);
      var_[c].assign(X.cols, 0.0);
    }
    double count[2] = {0, 0};
    for (std::size_t r = 0; r < X.rows; ++r) {
      const int c = y[r] == 1;
      count[c] += 1;
      for (std::size_t f = 0; f < X.cols; ++f) mean_[c][f] += X(r, f);
    }
    for (int c = 0; c < 2; ++c) {
      for (auto& m : mean_[c]) m /= std::max(count[c], 1.0);
    }
    for (std::size_t r = 0; r < X.rows; ++r) {
      const int c = y[r] == 1;
      for (std::size_t f = 0; f < X.cols; ++f) {
        const double d = X(r, f) - mean_[c][f];
        var_[c][f] += d * d;
      }
    }
    for (int c = 0; c < 2; ++c) {
      for (auto& v : var_[c]) v = std::max(v / std::max(count[c], 1.0), floor_);
      prior_[c] = count[c] / static_cast<double>(X.rows);
    }
  }

  // Class log joint likelihood log P(c) + sum_f log N(x_f; mean, var).
  double log_joint(std::span<const double> x, int c) const {
    double s = std::log(prior_[c]);
    for (std::size_t f = 0; f < x.size(); ++f) {
      const double d = x[f] - mean_[c][f];
      s += -0.5 * std::log(2 * std::numbers::pi * var_[c][f]) - d * d / (2 * var_[c][f]);
    }
    return s;
  }

  std::vector<double> scores(const Matrix& X) const override {
    std::vector<double> out;
    for (std::size_t r = 0; r < X.rows; ++r) {
      const double l0 = log_joint(X.row(r), 0), l1 = log_joint(X.row(r), 1);
      out.push_back(sigmoid(l1 - l0));
    }
    return out;
  }

  Json save() const override {
    return {{"prior", {prior_[0], prior_[1]}}, {"mean", {mean_[0], mean_[1]}}, {"var", {var_[0], var_[1]}}};
  }
  void load(const Json& j) override {
    for (int c = 0; c < 2; ++c) {
      prior_[c] = j.at("prior").at(c).get<double>();
      mean_[c] = j.at("mean").at(c).get<std::vector<double>>();
      var_[c] = j.at("var").at(c).get<std::vector<double>>();
    }
  }

 private:
  double floor_;
  double prior_[2] = {0, 0};
  std::vector<double> mean_[2], var_[2];
};

}  // namespace jsvp::learn
