#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "jsvp/js/functions.hpp"
#include "jsvp/metrics/clones.hpp"

namespace jsvp::history {

// What identity tracking needs to remember about a function between revisions.
struct FunctionShape {
  js::FunctionKey key;
  std::vector<std::uint64_t> trigrams;  // sorted, unique
  std::size_t body_tokens = 0;
};

// Hashed trigrams of the normalized body tokens of f.
inline std::vector<std::uint64_t> body_trigrams(const js::Inventory& inv, const js::FunctionInfo& f) {
  std::vector<std::uint64_t> codes;
  for (auto p = f.body_begin; p < f.body_end; ++p) {
    codes.push_back(std::hash<std::string>{}(metrics::normalized_lexeme(inv.sig(p), true)));
  }
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i + 2 < codes.size(); ++i) {
    std::uint64_t h = codes[i];
    h = h * 0x9E3779B97F4A7C15ULL ^ codes[i + 1];
    h = h * 0x9E3779B97F4A7C15ULL ^ codes[i + 2];
    out.push_back(h);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<FunctionShape> function_shapes(const js::Inventory& inv) {
  std::vector<FunctionShape> out;
  out.reserve(inv.functions.size());
  for (const auto& f : inv.functions) {
    out.push_back({f.key, body_trigrams(inv, f), f.body_end > f.body_begin ? f.body_end - f.body_begin : 0});
  }
  return out;
}

inline double jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

struct IdentityOptions {
  double threshold = 0.8;
  std::size_t min_tokens = 10;  // smaller bodies match by name only
};

// For each function of `next`, the index of its predecessor in `prev`, or -1.
// Names match first; the rest pair up greedily by descending body
// similarity, ties broken by position.
inline std::vector<int> track_identity(const std::vector<FunctionShape>& prev, const std::vector<FunctionShape>& next,
                                       const IdentityOptions& opt = {}) {
  std::vector<int> out(next.size(), -1);
  std::vector<bool> taken(prev.size(), false);
  for (std::size_t j = 0; j < next.size(); ++j) {
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (!taken[i] && prev[i].key.qualified_name == next[j].key.qualified_name) {
        out[j] = static_cast<int>(i);
        taken[i] = true;
        break;
      }
    }
  }
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t j = 0; j < next.size(); ++j) {
    if (out[j] >= 0 || next[j].body_tokens < opt.min_tokens) continue;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (taken[i] || prev[i].body_tokens < opt.min_tokens) continue;
      const double s = jaccard(prev[i].trigrams, next[j].trigrams);
      if (s >= opt.threshold) candidates.emplace_back(s, i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  for (const auto& [s, i, j] : candidates) {
    if (taken[i] || out[j] >= 0) continue;
    taken[i] = true;
    out[j] = static_cast<int>(i);
  }
  return out;
}

}  // namespace jsvp::history
