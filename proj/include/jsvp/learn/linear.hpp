#pragma once

#include <cmath>
#include <vector>

#include "jsvp/common/error.hpp"
#include "jsvp/learn/classifier.hpp"
#include "jsvp/learn/params.hpp"

namespace jsvp::learn {

struct LinearWeights {
  std::vector<double> w;
  double b = 0;

  double decision(std::span<const double> x) const {
    double z = b;
    for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[i];
    return z;
  }
};

// Mean cross-entropy plus (l2 / 2)|w|^2, with its gradient.
inline double logreg_loss(const Matrix& X, const std::vector<int>& y, const LinearWeights& m, double l2,
                          LinearWeights* grad = nullptr) {
  double loss = 0;
  if (grad) {
    grad->w.assign(m.w.size(), 0.0);
    grad->b = 0;
  }
  const double n = static_cast<double>(X.rows);
  for (std::size_t r = 0; r < X.rows; ++r) {
    const auto x = X.row(r);
    const double z = m.decision(x);
    loss += softplus(z) - y[r] * z;
    if (grad) {
      const double d = (sigmoid(z) - y[r]) / n;
      for (std::size_t i = 0; i < x.size(); ++i) grad->w[i] += d * x[i];
      grad->b += d;
    }
  }
  loss /= n;
  for (std::size_t i = 0; i < m.w.size(); ++i) {
    loss += 0.5 * l2 * m.w[i] * m.w[i];
    if (grad) grad->w[i] += l2 * m.w[i];
  }
  return loss;
}

inline Json weights_json(const LinearWeights& m) { return {{"w", m.w}, {"b", m.b}}; }
inline LinearWeights weights_from(const Json& j) { return {j.at("w").get<std::vector<double>>(), j.at("b").get<double>()}; }

// Full-batch gradient descent from zero weights.
class LogisticRegression : public Classifier {
 public:
  explicit LogisticRegression(const Params& p)
      : epochs_(static_cast<int>(int_param(p, "epochs"))), l2_(real_param(p, "l2")), lr_(real_param(p, "learning_rate")) {}

  void fit(const Matrix& X, const std::vector<int>& y, const FitContext&) override {
    m_.w.assign(X.cols, 0.0);
    m_.b = 0;
    LinearWeights g;
    for (int e = 0; e < epochs_; ++e) {
      logreg_loss(X, y, m_, l2_, &g);
      for (std::size_t i = 0; i < m_.w.size(); ++i) m_.w[i] -= lr_ * g.w[i];
      m_.b -= lr_ * g.b;
    }
  }

  std::vector<double> scores(const Matrix& X) const override {
    std::vector<double> out;
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(sigmoid(m_.decision(X.row(r))));
    return out;
  }

  const LinearWeights& weights() const { return m_; }
  void set_weights(LinearWeights m) { m_ = std::move(m); }

  Json save() const override { return weights_json(m_); }
  void load(const Json& j) override { m_ = weights_from(j); }

 private:
  int epochs_;
  double l2_, lr_;
  LinearWeights m_;
};

// Solves A x = b in place for symmetric positive definite A (n x n,
// row-major). Returns false when A is not positive definite.
inline bool cholesky_solve(std::vector<double> A, std::vector<double>& b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = A[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
    if (!(d > 0)) return false;
    d = std::sqrt(d);
    A[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = A[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
      A[i * n + j] = s / d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= A[i * n + k] * b[k];
    b[i] = s / A[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[k * n + i] * b[k];
    b[i] = s / A[i * n + i];
  }
  return true;
}

// Least squares on 0/1 targets with an unpenalised intercept; a prediction
// of 0.5 or more is positive.
class LinearRegression : public Classifier {
 public:
  explicit LinearRegression(const Params& p) : ridge_(real_param(p, "ridge")) {}

  void fit(const Matrix& X, const std::vector<int>& y, const FitContext&) override {
    const std::size_t n = X.cols + 1;
    std::vector<double> A(n * n, 0.0), b(n, 0.0);
    for (std::size_t r = 0; r < X.rows; ++r) {
      const auto x = X.row(r);
      auto at = [&](std::size_t i) { return i < X.cols ? x[i] : 1.0; };
      for (std::size_t i = 0; i < n; ++i) {
        const double xi = at(i);
        b[i] += xi * y[r];
        for (std::size_t j = 0; j <= i; ++j) A[i * n + j] += xi * at(j);
      }
    }
    double trace = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) A[j * n + i] = A[i * n + j];
      trace += A[i * n + i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) A[i * n + i] += ridge_;
    // Rank-deficient designs get the smallest diagonal jitter that works.
    std::vector<double> sol = b;
    for (double jitter = 0; !cholesky_solve(A, sol, n);) {
      const double next = jitter == 0 ? 1e-12 * std::max(trace, 1.0) : jitter * 10;
      if (next > trace + 1.0) throw Error(ErrorCode::Model, "least squares system is singular");
      for (std::size_t i = 0; i + 1 < n; ++i) A[i * n + i] += next - jitter;
      jitter = next;
      sol = b;
    }
    m_.w.assign(sol.begin(), sol.end() - 1);
    m_.b = sol.back();
  }

  std::vector<double> raw(const Matrix& X) const {
    std::vector<double> out;
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(m_.decision(X.row(r)));
    return out;
  }

  std::vector<double> scores(const Matrix& X) const override {
    auto out = raw(X);
    for (auto& v : out) v = std::clamp(v, 0.0, 1.0);
    return out;
  }

  Json save() const override { return weights_json(m_); }
  void load(const Json& j) override { m_ = weights_from(j); }

 private:
  double ridge_;
  LinearWeights m_;
};

}  // namespace jsvp::learn
