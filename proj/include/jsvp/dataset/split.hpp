#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/common/error.hpp"
#include "jsvp/common/rng.hpp"

namespace jsvp::dataset {

struct SplitSpec {
  double train = 0.8, dev = 0.1, test = 0.1;
  int k = 10;
  std::uint64_t seed = 1;

  void validate() const {
    if (train < 0 || dev < 0 || test < 0 || std::abs(train + dev + test - 1.0) > 1e-9) {
      throw Error(ErrorCode::Config, "split fractions must be non-negative and sum to 1");
    }
    if (k < 2) throw Error(ErrorCode::Config, "k must be at least 2");
  }

  static SplitSpec from_config(const Config& cfg) {
    SplitSpec s;
    s.train = cfg.get_number("split.train", s.train);
    s.dev = cfg.get_number("split.dev", s.dev);
    s.test = cfg.get_number("split.test", s.test);
    s.k = static_cast<int>(cfg.get_number("split.k", s.k));
    s.seed = static_cast<std::uint64_t>(cfg.get_number("split.seed", static_cast<double>(s.seed)));
    s.validate();
    return s;
  }
};

// Partition sizes by largest remainder; equal remainders go to the later
// partition.
inline std::vector<std::size_t> largest_remainder(std::size_t n, const std::vector<double>& fractions) {
  std::vector<std::size_t> sizes;
  std::vector<double> rem;
  std::size_t used = 0;
  for (double f : fractions) {
    const double exact = f * static_cast<double>(n);
    auto whole = static_cast<std::size_t>(std::floor(exact + 1e-9));
    sizes.push_back(whole);
    rem.push_back(std::max(0.0, exact - static_cast<double>(whole)));
    used += whole;
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(rem[a] - rem[b]) > 1e-9) return rem[a] > rem[b];
    return a > b;
  });
  for (std::size_t i = 0; used < n; ++i, ++used) ++sizes[order[i % order.size()]];
  return sizes;
}

// Sample indices shuffled within each class and then interleaved so that
// every contiguous stretch holds the classes in proportion: the i-th of n_c
// members of class c sits at position (i + 0.5) / n_c.
inline std::vector<std::size_t> stratified_order(const std::vector<int>& labels, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  std::vector<std::tuple<double, int, std::size_t>> placed;
  for (auto& [c, members] : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    const double n = static_cast<double>(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) placed.emplace_back((static_cast<double>(i) + 0.5) / n, c, members[i]);
  }
  std::sort(placed.begin(), placed.end());
  std::vector<std::size_t> out;
  out.reserve(placed.size());
  for (const auto& p : placed) out.push_back(std::get<2>(p));
  return out;
}

struct Partition {
  std::vector<std::size_t> train, dev, test;
};

inline Partition split(const std::vector<int>& labels, const SplitSpec& spec) {
  spec.validate();
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  const int parts = (spec.train > 0) + (spec.dev > 0) + (spec.test > 0);
  for (const auto& [c, n] : counts) {
    if (n < static_cast<std::size_t>(parts)) {
      throw Error(ErrorCode::InsufficientClassSamples,
                  "class " + std::to_string(c) + " has " + std::to_string(n) + " samples for " +
                      std::to_string(parts) + " partitions");
    }
  }
  const auto order = stratified_order(labels, spec.seed);
  const auto sizes = largest_remainder(labels.size(), {spec.train, spec.dev, spec.test});
  Partition p;
  p.train.assign(order.begin(), order.begin() + sizes[0]);
  p.dev.assign(order.begin() + sizes[0], order.begin() + sizes[0] + sizes[1]);
  p.test.assign(order.begin() + sizes[0] + sizes[1], order.end());
  return p;
}

// k disjoint stratified folds whose sizes differ by at most one.
inline std::vector<std::vector<std::size_t>> folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::Config, "k must be at least 2");
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  for (const auto& [c, n] : counts) {
    if (n < static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::InsufficientClassSamples, "class " + std::to_string(c) + " has " + std::to_string(n) +
                                                           " samples, fewer than k = " + std::to_string(k));
    }
  }
  // Classes laid end to end, each shuffled, dealt round-robin.
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& [c, members] : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (auto m : members) out[next++ % out.size()].push_back(m);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

}  // namespace jsvp::dataset
