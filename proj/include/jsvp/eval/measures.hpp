#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "jsvp/common/error.hpp"

namespace jsvp::eval {

struct Confusion {
  long long tp = 0, tn = 0, fp = 0, fn = 0;

  long long total() const { return tp + tn + fp + fn; }
  bool operator==(const Confusion&) const = default;
};

inline Confusion confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(truth.size()) + " labels vs " +
                                               std::to_string(predicted.size()) + " predictions");
  }
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) {
      predicted[i] == 1 ? ++c.tp : ++c.fn;
    } else {
      predicted[i] == 1 ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

// Precision (and with it F) is undefined when nothing is predicted positive.
struct IrMeasures {
  double accuracy = 0;
  std::optional<double> precision;
  double recall = 0;
  std::optional<double> f_measure;
};

inline IrMeasures ir_measures(const Confusion& c) {
  IrMeasures m;
  const auto total = static_cast<double>(c.total());
  m.accuracy = total > 0 ? static_cast<double>(c.tp + c.tn) / total : 0.0;
  m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  if (c.tp + c.fp > 0) {
    const double p = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.precision = p;
    m.f_measure = p + m.recall > 0 ? 2 * p * m.recall / (p + m.recall) : 0.0;
  }
  return m;
}

// Percentage with one decimal, or "n/a".
inline std::string percent(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
  return buf;
}

enum class Measure { Accuracy, Precision, Recall, FMeasure };

inline Measure parse_measure(const std::string& name) {
  if (name == "accuracy") return Measure::Accuracy;
  if (name == "precision") return Measure::Precision;
  if (name == "recall") return Measure::Recall;
  if (name == "f_measure" || name == "f") return Measure::FMeasure;
  throw Error(ErrorCode::Config, "unknown measure '" + name + "'");
}

inline std::string measure_name(Measure m) {
  switch (m) {
    case Measure::Accuracy: return "accuracy";
    case Measure::Precision: return "precision";
    case Measure::Recall: return "recall";
    case Measure::FMeasure: return "f_measure";
  }
  return "?";
}

// Undefined values rank below every defined one.
inline double measure_value(const IrMeasures& m, Measure which) {
  switch (which) {
    case Measure::Accuracy: return m.accuracy;
    case Measure::Precision: return m.precision.value_or(-1.0);
    case Measure::Recall: return m.recall;
    case Measure::FMeasure: return m.f_measure.value_or(-1.0);
  }
  return -1.0;
}

}  // namespace jsvp::eval
