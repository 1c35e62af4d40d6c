#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/common/csv.hpp"
#include "jsvp/common/parallel.hpp"
#include "jsvp/js/functions.hpp"
#include "jsvp/metrics/clones.hpp"
#include "jsvp/metrics/complexity.hpp"
#include "jsvp/metrics/halstead.hpp"
#include "jsvp/metrics/invocations.hpp"
#include "jsvp/metrics/lint.hpp"
#include "jsvp/metrics/size.hpp"
#include "jsvp/metrics/structure.hpp"

namespace jsvp::metrics {

inline constexpr std::array<std::string_view, 42> kStaticColumns = {
    "CC",     "CCL",   "CCO",   "CI",     "CLC",   "LDC",   "McCC",  "CYCL",      "NII",
    "NL",     "NLE",   "NOI",   "CD",     "TCD",   "CLOC",  "TCLOC", "DLOC",      "LLOC",
    "TLLOC",  "LOC",   "TLOC",  "NOS",    "TNOS",  "NUMPAR", "PARAMS", "HOR_D",   "HOR_T",
    "HON_D",  "HON_T", "HLEN",  "HVOC",   "HDIFF", "HVOL",  "HEFF",  "HBUGS",     "HTIME",
    "CYCL_DENS", "WarningInfo", "WarningMinor", "WarningMajor", "WarningCritical", "WarningBlocker"};

inline std::size_t static_column(std::string_view name) {
  for (std::size_t i = 0; i < kStaticColumns.size(); ++i) {
    if (kStaticColumns[i] == name) return i;
  }
  throw Error(ErrorCode::MissingFeature, "unknown static metric '" + std::string(name) + "'");
}

struct StaticVector {
  std::array<double, 42> values{};

  double& operator[](std::string_view name) { return values[static_column(name)]; }
  double operator[](std::string_view name) const { return values[static_column(name)]; }
};

struct StaticRow {
  js::FunctionKey key;
  StaticVector metrics;
};

struct StaticConfig {
  McCCOptions mccc;
  CloneOptions clones;
  LintRuleset lint;
  bool exclude_partial = false;  // drop files whose lexing or bracket matching needed recovery
  unsigned threads = 0;

  static StaticConfig from_config(const Config& cfg) {
    StaticConfig s;
    s.mccc = McCCOptions::from_config(cfg);
    s.clones = CloneOptions::from_config(cfg);
    s.lint = LintRuleset::from_config(cfg);
    s.exclude_partial = cfg.get_bool("inventory.exclude_partial", s.exclude_partial);
    s.threads = static_cast<unsigned>(cfg.get_number("run.threads", 0));
    return s;
  }
};

struct SourceFile {
  std::string path;  // repository-relative
  std::string text;
};

struct StaticResult {
  std::vector<StaticRow> rows;
  std::vector<std::string> skipped;  // partial files left out
  std::vector<std::pair<std::string, js::Diagnostic>> diagnostics;
};

// File-local metrics; invocations and clones are filled in afterwards.
inline std::vector<StaticVector> local_metrics(const js::Inventory& inv, const StaticConfig& cfg) {
  const auto n = inv.functions.size();
  std::vector<StaticVector> out(n);
  std::vector<BodyStructure> bodies;
  bodies.reserve(n);
  for (const auto& f : inv.functions) bodies.push_back(body_structure(inv, f));
  const auto nesting = nesting_levels(inv, bodies);
  const auto sizes = size_metrics(inv);
  const auto tails = do_while_tails(inv);

  std::vector<double> tnos(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    tnos[k] = bodies[k].statements;
    for (int c : inv.functions[k].children) tnos[k] += tnos[c];
  }

  for (std::size_t k = 0; k < n; ++k) {
    const auto& f = inv.functions[k];
    auto& v = out[k];
    const auto own = inv.own_tokens(f);
    std::vector<js::Token> own_toks;
    own_toks.reserve(own.size());
    for (auto p : own) own_toks.push_back(inv.sig(p));

    const double cyclomatic = mccc(inv, own, tails, cfg.mccc);
    v["McCC"] = cyclomatic;
    v["CYCL"] = cyclomatic;
    v["NL"] = nesting[k].nl;
    v["NLE"] = nesting[k].nle;
    const auto& s = sizes[k];
    v["LOC"] = s.loc;
    v["TLOC"] = s.tloc;
    v["LLOC"] = s.lloc;
    v["TLLOC"] = s.tlloc;
    v["CLOC"] = s.cloc;
    v["TCLOC"] = s.tcloc;
    v["DLOC"] = s.dloc;
    v["CD"] = s.cd;
    v["TCD"] = s.tcd;
    v["NUMPAR"] = s.numpar;
    v["PARAMS"] = s.numpar;
    v["NOS"] = bodies[k].statements;
    v["TNOS"] = tnos[k];
    v["CYCL_DENS"] = s.lloc > 0 ? cyclomatic / s.lloc : 0.0;

    const auto h = halstead(own_toks);
    v["HOR_D"] = h.distinct_operators;
    v["HOR_T"] = h.total_operators;
    v["HON_D"] = h.distinct_operands;
    v["HON_T"] = h.total_operands;
    v["HLEN"] = h.length;
    v["HVOC"] = h.vocabulary;
    v["HDIFF"] = h.difficulty;
    v["HVOL"] = h.volume;
    v["HEFF"] = h.effort;
    v["HBUGS"] = h.bugs;
    v["HTIME"] = h.time;

    const auto w = lint(inv, f, cfg.lint);
    v["WarningInfo"] = w[0];
    v["WarningMinor"] = w[1];
    v["WarningMajor"] = w[2];
    v["WarningCritical"] = w[3];
    v["WarningBlocker"] = w[4];
  }
  return out;
}

// All 42 metrics for every function of a project snapshot. Files are
// processed in parallel; invocations and clones are reduced project-wide.
// Rows come out sorted by FunctionKey.
inline StaticResult analyze_project(const std::vector<SourceFile>& sources, const StaticConfig& cfg = {}) {
  std::vector<js::Inventory> all(sources.size());
  parallel_for(sources.size(), cfg.threads,
               [&](std::size_t i) { all[i] = js::extract_inventory(sources[i].text, sources[i].path); });

  StaticResult result;
  std::vector<const js::Inventory*> files;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& d : all[i].diagnostics) result.diagnostics.emplace_back(sources[i].path, d);
    if (cfg.exclude_partial && all[i].partial) {
      result.skipped.push_back(sources[i].path);
      continue;
    }
    files.push_back(&all[i]);
  }

  std::vector<std::vector<StaticVector>> vectors(files.size());
  parallel_for(files.size(), cfg.threads, [&](std::size_t i) { vectors[i] = local_metrics(*files[i], cfg); });

  const auto calls = invocations(files);
  std::vector<std::vector<double>> loc(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    for (const auto& v : vectors[i]) loc[i].push_back(v["LOC"]);
  }
  const auto clones = detect_clones(files, loc, cfg.clones, cfg.mccc);

  for (std::size_t i = 0; i < files.size(); ++i) {
    for (std::size_t k = 0; k < vectors[i].size(); ++k) {
      auto& v = vectors[i][k];
      v["NII"] = calls.incoming[i][k];
      v["NOI"] = calls.outgoing[i][k];
      const auto& c = clones.per_function[i][k];
      v["CC"] = c.cc;
      v["CCL"] = c.ccl;
      v["CCO"] = c.cco;
      v["CI"] = c.ci;
      v["CLC"] = c.clc;
      v["LDC"] = c.ldc;
      result.rows.push_back({files[i]->functions[k].key, v});
    }
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const StaticRow& a, const StaticRow& b) { return a.key < b.key; });
  return result;
}

inline std::vector<std::string> static_csv_header() {
  std::vector<std::string> h = {"path", "qualified_name", "start_line", "end_line"};
  for (auto c : kStaticColumns) h.emplace_back(c);
  return h;
}

inline CsvTable static_table(const std::vector<StaticRow>& rows) {
  CsvTable t;
  t.header = static_csv_header();
  for (const auto& r : rows) {
    std::vector<std::string> line = {r.key.file_path, r.key.qualified_name, std::to_string(r.key.span.start_line),
                                     std::to_string(r.key.span.end_line)};
    for (double x : r.metrics.values) line.push_back(format_number(x));
    t.rows.push_back(std::move(line));
  }
  return t;
}

}  // namespace jsvp::metrics
