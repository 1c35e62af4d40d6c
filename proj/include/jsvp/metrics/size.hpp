#pragma once

#include <set>
#include <vector>

#include "jsvp/js/functions.hpp"

namespace jsvp::metrics {

struct SizeMetrics {
  double loc = 0, tloc = 0;
  double lloc = 0, tlloc = 0;
  double cloc = 0, tcloc = 0;
  double dloc = 0;
  double cd = 0, tcd = 0;
  double numpar = 0;
};

namespace detail {

inline void add_lines(std::set<int>& lines, const js::Token& t) {
  for (int l = t.span.start_line; l <= t.span.end_line; ++l) lines.insert(l);
}

inline double ratio(double a, double b) { return b > 0 ? a / b : 0.0; }

// Start of the statement that introduces f: `const f = ...`, `obj.f = ...`,
// `f: function ...`, `export default function ...`, `static async m() {}`.
inline std::size_t declaration_start(const js::Inventory& inv, const js::FunctionInfo& f) {
  std::size_t k = f.first;
  while (k > 0) {
    const auto& p = inv.sig(k - 1);
    const bool joins = p.kind == js::TokenKind::Identifier || p.is_op("=") || p.is_op(".") || p.is_op(":") ||
                       p.is_keyword("var") || p.is_keyword("let") || p.is_keyword("const") ||
                       p.is_keyword("export") || p.is_keyword("default") || p.is_keyword("static") ||
                       p.is_keyword("this");
    if (!joins || js::asi_break(p, inv.sig(k))) break;
    --k;
  }
  return k;
}

}  // namespace detail

// Line and comment metrics of every function. Own lines exclude lines that
// lie inside a nested function and hold none of the parent's own tokens.
inline std::vector<SizeMetrics> size_metrics(const js::Inventory& inv) {
  const auto& toks = inv.stream.tokens;
  const auto nf = inv.functions.size();
  std::vector<SizeMetrics> out(nf);

  // Innermost owner of each stream token.
  std::vector<int> owner(toks.size(), -1);
  for (std::size_t k = 0; k < nf; ++k) {
    const auto& f = inv.functions[k];
    const auto lo = inv.significant[f.first];
    const auto hi = inv.significant[std::min(f.last, inv.size() - 1)];
    for (auto i = lo; i <= hi; ++i) owner[i] = static_cast<int>(k);  // preorder: children overwrite
  }

  std::vector<std::set<int>> own_code(nf), own_comment(nf), all_code(nf), all_comment(nf);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const int o = owner[i];
    if (o < 0) continue;
    const bool comment = toks[i].kind == js::TokenKind::Comment;
    detail::add_lines(comment ? own_comment[o] : own_code[o], toks[i]);
    for (int a = o; a >= 0; a = inv.functions[a].parent) {
      detail::add_lines(comment ? all_comment[a] : all_code[a], toks[i]);
    }
  }

  for (std::size_t k = 0; k < nf; ++k) {
    const auto& f = inv.functions[k];
    auto& m = out[k];
    const auto& span = f.key.span;
    m.tloc = span.end_line - span.start_line + 1;

    std::set<int> child_lines;
    for (int c : f.children) {
      const auto& cs = inv.functions[c].key.span;
      for (int l = cs.start_line; l <= cs.end_line; ++l) child_lines.insert(l);
    }
    for (int l = span.start_line; l <= span.end_line; ++l) {
      if (!child_lines.count(l) || own_code[k].count(l) || own_comment[k].count(l)) m.loc += 1;
    }
    m.lloc = static_cast<double>(own_code[k].size());
    m.tlloc = static_cast<double>(all_code[k].size());
    m.cloc = static_cast<double>(own_comment[k].size());
    m.tcloc = static_cast<double>(all_comment[k].size());
    m.cd = detail::ratio(m.cloc, m.cloc + m.lloc);
    m.tcd = detail::ratio(m.tcloc, m.tcloc + m.tlloc);
    m.numpar = f.param_count;

    // Documentation: the comment run right above the declaration, with no
    // blank line in between and not trailing code on its own line.
    const auto anchor = inv.significant[detail::declaration_start(inv, f)];
    int next_line = toks[anchor].span.start_line;
    std::set<int> doc;
    for (auto i = anchor; i-- > 0;) {
      const auto& t = toks[i];
      if (t.kind != js::TokenKind::Comment) break;
      if (t.span.end_line < next_line - 1) break;
      if (i > 0 && toks[i - 1].kind != js::TokenKind::Comment && toks[i - 1].span.end_line == t.span.start_line) break;
      detail::add_lines(doc, t);
      next_line = t.span.start_line;
    }
    for (int l : doc) {
      if (l < toks[anchor].span.start_line) m.dloc += 1;
    }
  }
  return out;
}

}  // namespace jsvp::metrics
