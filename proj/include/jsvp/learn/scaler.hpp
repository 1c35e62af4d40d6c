#pragma once

#include <cmath>
#include <vector>

#include "jsvp/common/error.hpp"
#include "jsvp/common/matrix.hpp"

namespace jsvp::learn {

// z-score per column from training statistics. Constant columns keep a unit
// divisor so they map to zero.
struct Scaler {
  std::vector<double> mean, scale;

  static Scaler fit(const Matrix& X) {
    Scaler s;
    s.mean.assign(X.cols, 0.0);
    s.scale.assign(X.cols, 1.0);
    if (X.rows == 0) return s;
    for (std::size_t r = 0; r < X.rows; ++r) {
      for (std::size_t c = 0; c < X.cols; ++c) s.mean[c] += X(r, c);
    }
    for (auto& m : s.mean) m /= static_cast<double>(X.rows);
    std::vector<double> var(X.cols, 0.0);
    for (std::size_t r = 0; r < X.rows; ++r) {
      for (std::size_t c = 0; c < X.cols; ++c) {
        const double d = X(r, c) - s.mean[c];
        var[c] += d * d;
      }
    }
    for (std::size_t c = 0; c < X.cols; ++c) {
      const double sd = std::sqrt(var[c] / static_cast<double>(X.rows));
      s.scale[c] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
  }

  Matrix transform(const Matrix& X) const {
    if (X.cols != mean.size()) throw Error(ErrorCode::FeatureManifestMismatch, "scaler width differs from input width");
    Matrix out = X;
    for (std::size_t r = 0; r < X.rows; ++r) {
      for (std::size_t c = 0; c < X.cols; ++c) out(r, c) = (X(r, c) - mean[c]) / scale[c];
    }
    return out;
  }
};

}  // namespace jsvp::learn
