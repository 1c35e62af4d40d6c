#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/common/csv.hpp"
#include "jsvp/common/matrix.hpp"
#include "jsvp/history/process_metrics.hpp"
#include "jsvp/js/functions.hpp"
#include "jsvp/metrics/static_metrics.hpp"

namespace jsvp::dataset {

struct SampleKey {
  std::string project;
  js::FunctionKey key;

  auto tie() const {
    return std::tie(project, key.file_path, key.qualified_name, key.span.start_line, key.span.end_line);
  }
  friend bool operator<(const SampleKey& a, const SampleKey& b) { return a.tie() < b.tie(); }
  friend bool operator==(const SampleKey& a, const SampleKey& b) { return a.tie() == b.tie(); }
};

inline std::vector<std::string> static_feature_names() {
  return {metrics::kStaticColumns.begin(), metrics::kStaticColumns.end()};
}
inline std::vector<std::string> process_feature_names() {
  return {history::kProcessColumns.begin(), history::kProcessColumns.end()};
}
inline std::vector<std::string> all_feature_names() {
  auto names = static_feature_names();
  for (auto& p : process_feature_names()) names.push_back(p);
  return names;
}

struct Dataset {
  std::vector<std::string> columns;  // feature manifest, in order
  std::vector<SampleKey> keys;
  Matrix X;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
  std::size_t positives() const {
    std::size_t n = 0;
    for (int v : y) n += v == 1;
    return n;
  }

  template <typename Indices>
  Dataset subset(const Indices& idx) const {
    Dataset d;
    d.columns = columns;
    d.X = X.select_rows(idx);
    for (std::size_t i : idx) {
      d.keys.push_back(keys[i]);
      d.y.push_back(y[i]);
    }
    return d;
  }

  // Same rows restricted to the named feature columns, in the given order.
  Dataset select_columns(const std::vector<std::string>& names) const {
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
      std::size_t k = 0;
      while (k < columns.size() && columns[k] != n) ++k;
      if (k == columns.size()) throw Error(ErrorCode::MissingFeature, "feature '" + n + "' is not in the dataset");
      idx.push_back(k);
    }
    Dataset d;
    d.columns = names;
    d.keys = keys;
    d.y = y;
    d.X = Matrix(X.rows, idx.size());
    for (std::size_t r = 0; r < X.rows; ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) d.X(r, c) = X(r, idx[c]);
    }
    return d;
  }

  void append(const Dataset& other) {
    if (other.columns != columns) throw Error(ErrorCode::FeatureManifestMismatch, "datasets have different columns");
    keys.insert(keys.end(), other.keys.begin(), other.keys.end());
    y.insert(y.end(), other.y.begin(), other.y.end());
    X.data.insert(X.data.end(), other.X.data.begin(), other.X.data.end());
    X.rows += other.X.rows;
  }

  void check_finite() const {
    for (std::size_t r = 0; r < X.rows; ++r) {
      for (std::size_t c = 0; c < X.cols; ++c) {
        if (!std::isfinite(X(r, c))) {
          throw Error(ErrorCode::NonFiniteFeature, "feature '" + columns[c] + "' of row " + std::to_string(r + 1) +
                                                       " is not finite");
        }
      }
    }
  }
};

inline std::vector<std::string> dataset_header(const std::vector<std::string>& columns) {
  std::vector<std::string> h = {"project", "path", "name", "start_line", "end_line"};
  h.insert(h.end(), columns.begin(), columns.end());
  h.push_back("label");
  return h;
}

inline CsvTable dataset_table(const Dataset& d) {
  CsvTable t;
  t.header = dataset_header(d.columns);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& k = d.keys[i];
    std::vector<std::string> line = {k.project, k.key.file_path, k.key.qualified_name,
                                     std::to_string(k.key.span.start_line), std::to_string(k.key.span.end_line)};
    for (double v : d.X.row(i)) line.push_back(format_number(v));
    line.push_back(std::to_string(d.y[i]));
    t.rows.push_back(std::move(line));
  }
  return t;
}

// Column mapping for foreign CSVs (such as the published dataset): maps a
// canonical name to the column that holds it. Unmapped names are looked up
// as-is. Keys come from the `columns.` section of a config, e.g.
//   [columns]
//   label = Vuln
//   path = Path
struct ColumnMap {
  std::map<std::string, std::string> source;

  static ColumnMap from_config(const Config& cfg) {
    ColumnMap m;
    for (const auto& key : cfg.keys_with_prefix("columns.")) m.source[key.substr(8)] = *cfg.get(key);
    return m;
  }
  std::string operator()(const std::string& canonical) const {
    auto it = source.find(canonical);
    return it == source.end() ? canonical : it->second;
  }
};

inline int parse_label(const std::string& text) {
  if (text == "1" || text == "true" || text == "TRUE" || text == "True" || text == "yes") return 1;
  if (text == "0" || text == "false" || text == "FALSE" || text == "False" || text == "no") return 0;
  const double v = parse_number(text, "label");
  if (v == 0.0) return 0;
  if (v == 1.0) return 1;
  throw Error(ErrorCode::Parse, "label must be 0 or 1, got '" + text + "'");
}

// Reads a dataset CSV. `features` selects the feature columns (default: all
// 61); a missing feature column is an error, never imputed. Key columns that
// are absent default to empty / 0 so foreign tables without spans load.
inline Dataset load_dataset(const CsvTable& t, const std::vector<std::string>& features = all_feature_names(),
                            const ColumnMap& map = {}) {
  Dataset d;
  d.columns = features;
  d.X.cols = features.size();
  std::vector<std::size_t> fidx;
  for (const auto& f : features) fidx.push_back(t.require_column(map(f)));
  const auto label = t.require_column(map("label"));
  auto optional = [&](const std::string& name) { return t.column(map(name)); };
  const auto project = optional("project"), path = optional("path"), name = optional("name"),
             start = optional("start_line"), end = optional("end_line");
  constexpr auto none = static_cast<std::size_t>(-1);
  std::set<SampleKey> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    SampleKey k;
    if (project != none) k.project = row[project];
    if (path != none) k.key.file_path = row[path];
    if (name != none) k.key.qualified_name = row[name];
    if (start != none) k.key.span.start_line = static_cast<int>(parse_integer(row[start], "start_line"));
    if (end != none) k.key.span.end_line = static_cast<int>(parse_integer(row[end], "end_line"));
    if (name != none && !seen.insert(k).second) {
      throw Error(ErrorCode::DuplicateKey, "duplicate sample " + k.key.file_path + ":" + k.key.qualified_name +
                                               " at CSV row " + std::to_string(r + 2));
    }
    for (auto c : fidx) {
      const double v = row[c].empty() ? std::nan("") : parse_number(row[c], t.header[c]);
      d.X.data.push_back(v);
    }
    ++d.X.rows;
    d.keys.push_back(std::move(k));
    d.y.push_back(parse_label(row[label]));
  }
  d.check_finite();
  return d;
}

struct JoinReport {
  std::size_t joined = 0;
  std::vector<js::FunctionKey> missing_process;  // static rows without a process row
  std::vector<js::FunctionKey> missing_static;   // process rows without a static row
  std::size_t labeled_positive = 0;
  std::vector<js::FunctionKey> unmatched_labels;  // positive labels that match no joined row
};

namespace detail {

using RowKey = std::tuple<std::string, std::string, int, int>;

inline RowKey row_key(const js::FunctionKey& k) {
  return {k.file_path, k.qualified_name, k.span.start_line, k.span.end_line};
}

inline js::FunctionKey key_from(const CsvTable& t, const std::vector<std::string>& row) {
  js::FunctionKey k;
  k.file_path = row[t.require_column("path")];
  k.qualified_name = row[t.require_column("qualified_name")];
  k.span.start_line = static_cast<int>(parse_integer(row[t.require_column("start_line")], "start_line"));
  k.span.end_line = static_cast<int>(parse_integer(row[t.require_column("end_line")], "end_line"));
  return k;
}

inline std::map<RowKey, std::pair<js::FunctionKey, std::vector<double>>> index_table(
    const CsvTable& t, const std::vector<std::string>& columns, const std::string& what) {
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(t.require_column(c));
  std::map<RowKey, std::pair<js::FunctionKey, std::vector<double>>> out;
  for (const auto& row : t.rows) {
    auto key = key_from(t, row);
    std::vector<double> values;
    for (auto i : idx) values.push_back(parse_number(row[i], t.header[i]));
    if (!out.emplace(row_key(key), std::make_pair(key, std::move(values))).second) {
      throw Error(ErrorCode::DuplicateKey,
                  "duplicate " + what + " row for " + key.file_path + ":" + key.qualified_name);
    }
  }
  return out;
}

}  // namespace detail

// Inner join of a static table and a process table on (path, name, span).
// Functions listed in `vulnerable` get label 1, all others 0. Rows come out
// in key order, so equal inputs give byte-identical output.
inline Dataset join(const std::string& project, const CsvTable& static_table, const CsvTable& process_table,
                    const std::set<js::FunctionKey>& vulnerable, JoinReport* report = nullptr) {
  const auto s = detail::index_table(static_table, static_feature_names(), "static");
  const auto p = detail::index_table(process_table, process_feature_names(), "process");
  std::set<detail::RowKey> positive;
  for (const auto& k : vulnerable) positive.insert(detail::row_key(k));

  Dataset d;
  d.columns = all_feature_names();
  d.X.cols = d.columns.size();
  JoinReport rep;
  std::set<detail::RowKey> used_labels;
  for (const auto& [key, sv] : s) {
    auto it = p.find(key);
    if (it == p.end()) {
      rep.missing_process.push_back(sv.first);
      continue;
    }
    std::vector<double> row = sv.second;
    row.insert(row.end(), it->second.second.begin(), it->second.second.end());
    d.X.push_row(row);
    d.keys.push_back({project, sv.first});
    const bool pos = positive.count(key) > 0;
    d.y.push_back(pos ? 1 : 0);
    if (pos) used_labels.insert(key);
  }
  for (const auto& [key, pv] : p) {
    if (!s.count(key)) rep.missing_static.push_back(pv.first);
  }
  for (const auto& k : vulnerable) {
    if (!used_labels.count(detail::row_key(k))) rep.unmatched_labels.push_back(k);
  }
  rep.joined = d.size();
  rep.labeled_positive = used_labels.size();
  if (report) *report = rep;
  d.check_finite();
  return d;
}

}  // namespace jsvp::dataset
