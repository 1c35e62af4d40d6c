#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jsvp/common/error.hpp"

namespace jsvp {

// Shortest decimal text that round-trips to the same double. Integral values
// print without a fractional part so count columns stay readable.
inline std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, end);
}

inline double parse_number(std::string_view text, std::string_view what = "number") {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::Parse, "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

inline long long parse_integer(std::string_view text, std::string_view what = "integer") {
  const double value = parse_number(text, what);
  if (value != std::floor(value)) {
    throw Error(ErrorCode::Parse, std::string(what) + " is not an integer: '" + std::string(text) + "'");
  }
  return static_cast<long long>(value);
}

inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(fields[i]);
  }
  line += '\n';
  return line;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or npos.
  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return static_cast<std::size_t>(-1);
  }

  std::size_t require_column(std::string_view name) const {
    const auto idx = column(name);
    if (idx == static_cast<std::size_t>(-1)) {
      throw Error(ErrorCode::MissingFeature, "CSV column '" + std::string(name) + "' is missing");
    }
    return idx;
  }

  std::string to_string() const {
    std::string out = csv_line(header);
    for (const auto& row : rows) out += csv_line(row);
    return out;
  }
};

// RFC 4180 reader: quoted fields may contain commas, quotes and newlines.
inline CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool first = true;

  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    if (first) {
      table.header = std::move(row);
      first = false;
    } else if (!(row.size() == 1 && row[0].empty())) {
      table.rows.push_back(std::move(row));
    }
    row.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      // swallowed; CRLF files end rows on the '\n'
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::Parse, "unterminated quoted CSV field");
  if (field_started || !row.empty()) end_row();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      throw Error(ErrorCode::Parse, "CSV row " + std::to_string(r + 2) + " has " +
                                        std::to_string(table.rows[r].size()) + " fields, header has " +
                                        std::to_string(table.header.size()));
    }
  }
  return table;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

inline CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

}  // namespace jsvp
