#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/common/error.hpp"
#include "jsvp/common/rng.hpp"

namespace jsvp::dataset {

enum class ResampleMode { None, Over, Under };

struct ResamplePlan {
  ResampleMode mode = ResampleMode::None;
  double ratio = 1.0;          // target positives / negatives
  bool of_total = false;       // read ratio as positives / (positives + negatives) instead

  static ResamplePlan from_config(const Config& cfg) {
    ResamplePlan p;
    const auto mode = cfg.get_or("resample.mode", "none");
    if (mode == "none") {
      p.mode = ResampleMode::None;
    } else if (mode == "over") {
      p.mode = ResampleMode::Over;
    } else if (mode == "under") {
      p.mode = ResampleMode::Under;
    } else {
      throw Error(ErrorCode::Config, "resample.mode must be none, over or under");
    }
    p.ratio = cfg.get_number("resample.ratio", p.ratio);
    const auto sem = cfg.get_or("resample.ratio_of", "negatives");
    if (sem == "total") {
      p.of_total = true;
    } else if (sem != "negatives") {
      throw Error(ErrorCode::Config, "resample.ratio_of must be negatives or total");
    }
    if (!(p.ratio > 0) || p.ratio > 1 || (p.of_total && p.ratio >= 1)) {
      throw Error(ErrorCode::Config, "resample.ratio out of range");
    }
    return p;
  }

  // r expressed as positives / negatives.
  double pos_per_neg() const { return of_total ? ratio / (1.0 - ratio) : ratio; }
};

// Row indices of the resampled training set. Over-sampling keeps every row
// and appends uniformly drawn duplicates of positives; under-sampling keeps
// all positives and a uniformly drawn subset of negatives, in original order.
inline std::vector<std::size_t> resample(const std::vector<int>& labels, const ResamplePlan& plan, std::uint64_t seed) {
  std::vector<std::size_t> pos, neg, all(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    all[i] = i;
    (labels[i] == 1 ? pos : neg).push_back(i);
  }
  if (plan.mode == ResampleMode::None) return all;
  const double r = plan.pos_per_neg();
  Rng rng(seed);
  if (plan.mode == ResampleMode::Over) {
    const auto target = static_cast<std::size_t>(std::floor(r * static_cast<double>(neg.size()) + 1e-9));
    if (pos.size() > target) {
      throw Error(ErrorCode::RatioUnreachable, "already " + std::to_string(pos.size()) + " positives, over-sampling to " +
                                                   std::to_string(target) + " would need removal");
    }
    if (pos.empty() && target > 0) throw Error(ErrorCode::EmptyClass, "no positives to duplicate");
    while (all.size() - neg.size() < target) all.push_back(pos[rng.below(pos.size())]);
    return all;
  }
  const auto target = static_cast<std::size_t>(std::floor(static_cast<double>(pos.size()) / r + 1e-9));
  if (neg.size() < target) {
    throw Error(ErrorCode::RatioUnreachable, "only " + std::to_string(neg.size()) + " negatives, under-sampling to " +
                                                 std::to_string(target) + " would need duplication");
  }
  rng.shuffle(std::span<std::size_t>(neg));
  neg.resize(target);
  std::vector<std::size_t> out = pos;
  out.insert(out.end(), neg.begin(), neg.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace jsvp::dataset
