#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "jsvp/common/matrix.hpp"

namespace jsvp::learn {

using Json = nlohmann::json;

class Network;

// Called once per epoch by the validating network; returns the dev score.
using DevScorer = std::function<double(int epoch, const Network&)>;

struct FitContext {
  std::uint64_t seed = 1;
  const Matrix* dev_X = nullptr;  // already in the model's feature space
  const std::vector<int>* dev_y = nullptr;
  DevScorer dev_scorer;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const Matrix& X, const std::vector<int>& y, const FitContext& ctx) = 0;
  // Positive-class score in [0, 1] per row.
  virtual std::vector<double> scores(const Matrix& X) const = 0;
  virtual std::vector<int> predict(const Matrix& X) const {
    std::vector<int> out;
    for (double s : scores(X)) out.push_back(s >= 0.5 ? 1 : 0);
    return out;
  }
  virtual Json save() const = 0;
  virtual void load(const Json& j) = 0;
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace jsvp::learn
