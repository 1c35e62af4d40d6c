#pragma once

#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

#include "jsvp/common/csv.hpp"
#include "jsvp/eval/grid_search.hpp"
#include "jsvp/eval/mcnemar.hpp"

namespace jsvp::eval {

struct ResultRow {
  std::string model;
  std::string config;
  Confusion cm;
};

inline std::vector<std::string> result_header() {
  return {"model", "config", "TP", "TN", "FP", "FN", "accuracy", "precision", "recall", "f_measure"};
}

inline std::vector<std::string> result_fields(const ResultRow& r) {
  const auto m = ir_measures(r.cm);
  return {r.model,
          r.config,
          std::to_string(r.cm.tp),
          std::to_string(r.cm.tn),
          std::to_string(r.cm.fp),
          std::to_string(r.cm.fn),
          percent(m.accuracy),
          percent(m.precision),
          percent(m.recall),
          percent(m.f_measure)};
}

inline CsvTable results_table(const std::vector<ResultRow>& rows) {
  CsvTable t;
  t.header = result_header();
  for (const auto& r : rows) t.rows.push_back(result_fields(r));
  return t;
}

inline CsvTable grid_table(const std::string& model, const std::vector<GridResult>& results) {
  CsvTable t;
  t.header = result_header();
  t.header.push_back("error");
  for (const auto& g : results) {
    auto f = result_fields({model, g.config, g.cm});
    if (g.error) {
      for (std::size_t i = 2; i < f.size(); ++i) f[i] = "";
    }
    f.push_back(g.error.value_or(""));
    t.rows.push_back(std::move(f));
  }
  return t;
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::vector<std::string> mcnemar_header() {
  return {"model", "statistic", "p_value", "decision", "b", "c"};
}

inline std::vector<std::string> mcnemar_fields(const std::string& model, const Contingency& t, const McNemarResult& r) {
  char p[32];
  std::snprintf(p, sizeof p, "%.6g", r.p_value);
  return {model, fixed(r.statistic, 3), p, r.rejected ? "rejected" : "accepted", std::to_string(t.ct[0][1]),
          std::to_string(t.ct[1][0])};
}

// Columns padded to their widest cell; numbers right-aligned.
inline std::string aligned_text(const CsvTable& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  measure(t.header);
  for (const auto& r : t.rows) measure(r);
  auto numeric = [](const std::string& s) {
    return !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s == "n/a" || s[0] == '-');
  };
  auto line = [&](const std::vector<std::string>& row, bool header) {
    std::string out;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      const std::string pad(width[i] - cell.size(), ' ');
      if (i) out += "  ";
      out += !header && numeric(cell) ? pad + cell : cell + pad;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(t.header, true);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') + "\n";
  for (const auto& r : t.rows) out += line(r, false);
  return out;
}

}  // namespace jsvp::eval
