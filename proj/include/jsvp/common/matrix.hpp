#pragma once

#include <span>
#include <vector>

#include "jsvp/common/error.hpp"

namespace jsvp {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  void push_row(std::span<const double> values) {
    if (rows == 0 && cols == 0) cols = values.size();
    if (values.size() != cols) throw Error(ErrorCode::LengthMismatch, "row width differs from matrix width");
    data.insert(data.end(), values.begin(), values.end());
    ++rows;
  }

  template <typename Indices>
  Matrix select_rows(const Indices& idx) const {
    Matrix m;
    m.cols = cols;
    m.data.reserve(idx.size() * cols);
    for (std::size_t i : idx) {
      const auto r = row(i);
      m.data.insert(m.data.end(), r.begin(), r.end());
    }
    m.rows = idx.size();
    return m;
  }
};

}  // namespace jsvp
