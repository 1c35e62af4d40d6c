#pragma once

#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>
#include <vector>

#include "jsvp/learn/classifier.hpp"
#include "jsvp/learn/params.hpp"

namespace jsvp::learn {

enum class Kernel { Linear, Rbf };

struct KernelFn {
  Kernel kind = Kernel::Rbf;
  double gamma = 1;

  double operator()(std::span<const double> a, std::span<const double> b) const {
    double s = 0;
    if (kind == Kernel::Linear) {
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return s;
    }
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-gamma * s);
  }
};

namespace detail {

// Kernel matrix rows computed on demand, least recently used evicted first.
class KernelCache {
 public:
  KernelCache(const Matrix& X, KernelFn k, std::size_t budget_bytes) : X_(X), k_(k) {
    capacity_ = std::max<std::size_t>(2, budget_bytes / std::max<std::size_t>(1, X.rows * sizeof(double)));
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto it = rows_.find(i); it != rows_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
    if (rows_.size() >= capacity_) {
      rows_.erase(lru_.back());
      lru_.pop_back();
    }
    lru_.push_front(i);
    auto& slot = rows_[i];
    slot.second = lru_.begin();
    slot.first.resize(X_.rows);
    const auto xi = X_.row(i);
    for (std::size_t j = 0; j < X_.rows; ++j) slot.first[j] = k_(xi, X_.row(j));
    return slot.first;
  }

 private:
  const Matrix& X_;
  KernelFn k_;
  std::size_t capacity_;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> rows_;
};

}  // namespace detail

// C-SVC trained by SMO with second-order working-set selection. The solver
// stops when the maximal KKT violation drops below `tol`.
class Svm : public Classifier {
 public:
  explicit Svm(const Params& p)
      : C_(real_param(p, "C")), gamma_(real_param(p, "gamma")), tol_(real_param(p, "tol")),
        max_iter_(int_param(p, "max_iter")) {
    kernel_.kind = p.at("kernel") == "linear" ? Kernel::Linear : Kernel::Rbf;
  }

  void fit(const Matrix& X, const std::vector<int>& labels, const FitContext&) override {
    const std::size_t n = X.rows;
    kernel_.gamma = gamma_ > 0 ? gamma_ : 1.0 / static_cast<double>(std::max<std::size_t>(1, X.cols));
    std::vector<double> y(n), alpha(n, 0.0), G(n, -1.0), QD(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = labels[i] == 1 ? 1.0 : -1.0;
      QD[i] = kernel_(X.row(i), X.row(i));
    }
    detail::KernelCache cache(X, kernel_, std::size_t{256} << 20);
    constexpr double tau = 1e-12;
    const double C = C_;
    auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0; };
    iterations_ = 0;
    while (iterations_ < max_iter_) {
      double gmax = -std::numeric_limits<double>::infinity(), gmax2 = gmax;
      std::ptrdiff_t i = -1, j = -1;
      for (std::size_t t = 0; t < n; ++t) {
        if (y[t] > 0 ? !upper(t) : !lower(t)) {
          const double v = -y[t] * G[t];
          if (v >= gmax) {
            gmax = v;
            i = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
      if (i < 0) break;
      const auto& Ki = cache.row(static_cast<std::size_t>(i));
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < n; ++t) {
        if (y[t] > 0 ? lower(t) : upper(t)) continue;
        const double v = y[t] * G[t];
        gmax2 = std::max(gmax2, v);
        const double diff = gmax + v;
        if (diff > 0) {
          const double quad = QD[static_cast<std::size_t>(i)] + QD[t] - 2.0 * Ki[t];
          const double obj = -(diff * diff) / (quad > 0 ? quad : tau);
          if (obj <= best) {
            best = obj;
            j = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
      if (gmax + gmax2 < tol_ || j < 0) break;
      ++iterations_;
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      const auto& Kj = cache.row(b);
      const auto& Ka = cache.row(a);
      const double Qab = y[a] * y[b] * Ka[b];
      const double old_a = alpha[a], old_b = alpha[b];
      if (y[a] != y[b]) {
        double quad = QD[a] + QD[b] + 2 * Qab;
        if (quad <= 0) quad = tau;
        const double delta = (-G[a] - G[b]) / quad;
        const double diff = alpha[a] - alpha[b];
        alpha[a] += delta;
        alpha[b] += delta;
        if (diff > 0) {
          if (alpha[b] < 0) {
            alpha[b] = 0;
            alpha[a] = diff;
          }
        } else if (alpha[a] < 0) {
          alpha[a] = 0;
          alpha[b] = -diff;
        }
        if (diff > 0) {
          if (alpha[a] > C) {
            alpha[a] = C;
            alpha[b] = C - diff;
          }
        } else if (alpha[b] > C) {
          alpha[b] = C;
          alpha[a] = C + diff;
        }
      } else {
        double quad = QD[a] + QD[b] - 2 * Qab;
        if (quad <= 0) quad = tau;
        const double delta = (G[a] - G[b]) / quad;
        const double sum = alpha[a] + alpha[b];
        alpha[a] -= delta;
        alpha[b] += delta;
        if (sum > C) {
          if (alpha[a] > C) {
            alpha[a] = C;
            alpha[b] = sum - C;
          }
        } else if (alpha[b] < 0) {
          alpha[b] = 0;
          alpha[a] = sum;
        }
        if (sum > C) {
          if (alpha[b] > C) {
            alpha[b] = C;
            alpha[a] = sum - C;
          }
        } else if (alpha[a] < 0) {
          alpha[a] = 0;
          alpha[b] = sum;
        }
      }
      const double da = alpha[a] - old_a, db = alpha[b] - old_b;
      for (std::size_t t = 0; t < n; ++t) G[t] += y[t] * (y[a] * Ka[t] * da + y[b] * Kj[t] * db);
    }

    // Bias from free vectors, or the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0;
    int free = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const double yg = y[t] * G[t];
      if (upper(t)) {
        if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (lower(t)) {
        if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++free;
        sum_free += yg;
      }
    }
    rho_ = free > 0 ? sum_free / free : (ub + lb) / 2;

    sv_ = Matrix();
    coef_.clear();
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] > 0) {
        sv_.push_row(X.row(t));
        coef_.push_back(alpha[t] * y[t]);
      }
    }
    sv_.cols = X.cols;
    w_.clear();
    if (kernel_.kind == Kernel::Linear) {
      w_.assign(X.cols, 0.0);
      for (std::size_t s = 0; s < sv_.rows; ++s) {
        for (std::size_t c = 0; c < X.cols; ++c) w_[c] += coef_[s] * sv_(s, c);
      }
    }
  }

  double decision(std::span<const double> x) const {
    double f = -rho_;
    if (!w_.empty()) {
      for (std::size_t c = 0; c < x.size(); ++c) f += w_[c] * x[c];
      return f;
    }
    for (std::size_t s = 0; s < sv_.rows; ++s) f += coef_[s] * kernel_(sv_.row(s), x);
    return f;
  }

  std::vector<double> scores(const Matrix& X) const override {
    std::vector<double> out;
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(sigmoid(decision(X.row(r))));
    return out;
  }

  std::vector<int> predict(const Matrix& X) const override {
    std::vector<int> out;
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(decision(X.row(r)) >= 0 ? 1 : 0);
    return out;
  }

  long long iterations() const { return iterations_; }

  Json save() const override {
    return {{"kernel", kernel_.kind == Kernel::Linear ? "linear" : "rbf"}, {"gamma", kernel_.gamma}, {"rho", rho_},
            {"coef", coef_}, {"sv", sv_.data}, {"cols", sv_.cols}, {"w", w_}};
  }

  void load(const Json& j) override {
    kernel_.kind = j.at("kernel") == "linear" ? Kernel::Linear : Kernel::Rbf;
    kernel_.gamma = j.at("gamma").get<double>();
    rho_ = j.at("rho").get<double>();
    coef_ = j.at("coef").get<std::vector<double>>();
    sv_.data = j.at("sv").get<std::vector<double>>();
    sv_.cols = j.at("cols").get<std::size_t>();
    sv_.rows = coef_.size();
    w_ = j.at("w").get<std::vector<double>>();
  }

 private:
  double C_, gamma_, tol_;
  long long max_iter_;
  long long iterations_ = 0;
  KernelFn kernel_;
  double rho_ = 0;
  Matrix sv_;
  std::vector<double> coef_, w_;
};

}  // namespace jsvp::learn
