#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/js/functions.hpp"
#include "jsvp/metrics/complexity.hpp"

namespace jsvp::metrics {

struct CloneOptions {
  std::size_t window = 50;
  bool type2 = true;  // identifiers and literals become placeholders

  static CloneOptions from_config(const Config& cfg) {
    CloneOptions o;
    const double w = cfg.get_number("clones.window", static_cast<double>(o.window));
    if (w < 1 || w != static_cast<double>(static_cast<std::size_t>(w))) {
      throw Error(ErrorCode::Config, "clones.window must be a positive integer");
    }
    o.window = static_cast<std::size_t>(w);
    const auto level = cfg.get_or("clones.normalization", "type2");
    if (level == "type1") {
      o.type2 = false;
    } else if (level != "type2") {
      throw Error(ErrorCode::Config, "clones.normalization must be type1 or type2, got '" + level + "'");
    }
    return o;
  }
};

struct CloneInstance {
  std::size_t file = 0;
  std::size_t first = 0, last = 0;  // significant-token range, inclusive
  int clone_class = 0;
};

struct CloneMetrics {
  double cc = 0, ccl = 0, cco = 0, ci = 0, clc = 0, ldc = 0;
};

struct CloneReport {
  std::vector<CloneInstance> instances;
  std::vector<std::vector<CloneMetrics>> per_function;  // per file, per function
};

inline std::string normalized_lexeme(const js::Token& t, bool type2) {
  if (type2 && t.kind == js::TokenKind::Identifier) return "$id";
  if (type2 && t.kind == js::TokenKind::Literal) return "$lit";
  return t.lexeme;
}

// Normalized significant tokens of every file as interned codes.
inline std::vector<std::vector<int>> normalized_codes(const std::vector<const js::Inventory*>& files, bool type2) {
  std::unordered_map<std::string, int> intern;
  std::vector<std::vector<int>> out(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    const auto& inv = *files[f];
    out[f].reserve(inv.size());
    for (std::size_t i = 0; i < inv.size(); ++i) {
      auto [it, fresh] = intern.try_emplace(normalized_lexeme(inv.sig(i), type2), static_cast<int>(intern.size()));
      out[f].push_back(it->second);
    }
  }
  return out;
}

// For every file, which window starts have an identical window elsewhere in
// the project. Windows are bucketed by a polynomial rolling hash and
// compared exactly within a bucket.
inline std::vector<std::vector<bool>> cloned_window_starts(const std::vector<std::vector<int>>& codes, std::size_t w) {
  std::vector<std::vector<bool>> cloned(codes.size());
  constexpr std::uint64_t kBase = 1000003ULL;
  std::uint64_t base_pow = 1;
  for (std::size_t i = 0; i < w; ++i) base_pow *= kBase;

  std::unordered_map<std::uint64_t, std::vector<std::pair<std::size_t, std::size_t>>> buckets;
  for (std::size_t f = 0; f < codes.size(); ++f) {
    const auto& c = codes[f];
    cloned[f].assign(c.size() >= w ? c.size() - w + 1 : 0, false);
    if (c.size() < w) continue;
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      h = h * kBase + static_cast<std::uint64_t>(c[i] + 1);
      if (i >= w) h -= base_pow * static_cast<std::uint64_t>(c[i - w] + 1);
      if (i + 1 >= w) buckets[h].emplace_back(f, i + 1 - w);
    }
  }
  auto same = [&](const std::pair<std::size_t, std::size_t>& a, const std::pair<std::size_t, std::size_t>& b) {
    return std::equal(codes[a.first].begin() + a.second, codes[a.first].begin() + a.second + w,
                      codes[b.first].begin() + b.second);
  };
  for (auto& [hash, starts] : buckets) {
    if (starts.size() < 2) continue;
    std::vector<bool> done(starts.size(), false);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (done[i]) continue;
      std::vector<std::size_t> group{i};
      for (std::size_t j = i + 1; j < starts.size(); ++j) {
        if (!done[j] && same(starts[i], starts[j])) {
          group.push_back(j);
          done[j] = true;
        }
      }
      if (group.size() < 2) continue;
      for (auto g : group) cloned[starts[g].first][starts[g].second] = true;
    }
  }
  return cloned;
}

// Turns cloned window starts into instances (maximal runs of consecutive
// cloned starts) and groups instances with identical normalized content
// into classes, numbered in order of first appearance.
inline std::vector<CloneInstance> clone_instances(const std::vector<std::vector<int>>& codes,
                                                  const std::vector<std::vector<bool>>& cloned, std::size_t w) {
  std::vector<CloneInstance> out;
  std::map<std::vector<int>, int> classes;
  for (std::size_t f = 0; f < cloned.size(); ++f) {
    const auto& starts = cloned[f];
    for (std::size_t s = 0; s < starts.size();) {
      if (!starts[s]) {
        ++s;
        continue;
      }
      std::size_t e = s;
      while (e + 1 < starts.size() && starts[e + 1]) ++e;
      CloneInstance inst{f, s, e + w - 1, 0};
      std::vector<int> content(codes[f].begin() + inst.first, codes[f].begin() + inst.last + 1);
      auto [it, fresh] = classes.try_emplace(std::move(content), static_cast<int>(classes.size()));
      inst.clone_class = it->second;
      out.push_back(inst);
      s = e + 1;
    }
  }
  return out;
}

// Per-function clone metrics given the detected instances and each
// function's LOC (own lines, used as the coverage denominator).
inline std::vector<std::vector<CloneMetrics>> clone_metrics(const std::vector<const js::Inventory*>& files,
                                                            const std::vector<CloneInstance>& instances,
                                                            const std::vector<std::vector<double>>& loc,
                                                            const McCCOptions& mopt = {}) {
  std::vector<std::vector<CloneMetrics>> out(files.size());
  std::vector<std::vector<const CloneInstance*>> by_file(files.size());
  for (const auto& inst : instances) by_file[inst.file].push_back(&inst);

  for (std::size_t f = 0; f < files.size(); ++f) {
    const auto& inv = *files[f];
    out[f].resize(inv.functions.size());
    if (by_file[f].empty()) continue;
    const auto tails = do_while_tails(inv);
    std::vector<int> instance_mccc;
    for (const auto* inst : by_file[f]) {
      int n = 1;
      for (auto p = inst->first; p <= inst->last; ++p) n += is_decision(inv.sig(p), p, tails, mopt) ? 1 : 0;
      instance_mccc.push_back(n);
    }
    for (std::size_t k = 0; k < inv.functions.size(); ++k) {
      const auto& fn = inv.functions[k];
      const auto own = inv.own_tokens(fn);
      auto& m = out[f][k];
      std::set<int> classes, lines;
      for (std::size_t i = 0; i < by_file[f].size(); ++i) {
        const auto* inst = by_file[f][i];
        if (inst->last < fn.first || inst->first > fn.last) continue;
        m.ci += 1;
        m.cco += instance_mccc[i];
        classes.insert(inst->clone_class);
        for (std::size_t p : own) {
          if (p < inst->first || p > inst->last) continue;
          const auto& t = inv.sig(p);
          for (int l = t.span.start_line; l <= t.span.end_line; ++l) lines.insert(l);
        }
      }
      m.ccl = static_cast<double>(classes.size());
      m.ldc = static_cast<double>(lines.size());
      const double denom = loc[f][k];
      m.cc = denom > 0 ? std::min(1.0, m.ldc / denom) : 0.0;
      m.clc = m.cc;
    }
  }
  return out;
}

inline CloneReport detect_clones(const std::vector<const js::Inventory*>& files,
                                 const std::vector<std::vector<double>>& loc, const CloneOptions& opt = {},
                                 const McCCOptions& mopt = {}) {
  const auto codes = normalized_codes(files, opt.type2);
  const auto cloned = cloned_window_starts(codes, opt.window);
  CloneReport report;
  report.instances = clone_instances(codes, cloned, opt.window);
  report.per_function = clone_metrics(files, report.instances, loc, mopt);
  return report;
}

}  // namespace jsvp::metrics
