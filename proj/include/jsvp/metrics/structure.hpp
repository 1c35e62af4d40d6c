#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "jsvp/js/functions.hpp"

namespace jsvp::metrics {

using js::FunctionInfo;
using js::Inventory;
using js::Token;
using js::TokenKind;

// `while` tokens that close a do-while loop; they are not separate loops.
inline std::set<std::size_t> do_while_tails(const Inventory& inv) {
  std::set<std::size_t> tails;
  const auto n = inv.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!inv.sig(k).is_keyword("do")) continue;
    std::size_t j = k + 1;
    if (inv.sig(j).is_punct("{")) {
      j = inv.match[j];
      if (j >= n) continue;
      ++j;
    } else {
      // single statement body: skip to the first ';' at this level
      while (j < n && !inv.sig(j).is_punct(";")) {
        const auto& t = inv.sig(j);
        if ((t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) && inv.match[j] < n) {
          j = inv.match[j] + 1;
        } else if (t.is_punct("}") || t.is_punct(")") || t.is_punct("]")) {
          break;
        } else {
          ++j;
        }
      }
      if (j < n && inv.sig(j).is_punct(";")) ++j;
    }
    if (j < n && inv.sig(j).is_keyword("while")) tails.insert(j);
  }
  return tails;
}

// Statement-level facts about one function body.
struct BodyStructure {
  int statements = 0;         // statements other than blocks and empty ones
  int nesting = 0;            // deepest control-structure nesting (NL)
  int nesting_else_if = 0;    // same, with else-if chains flattened (NLE)
  std::map<int, int> child_depth;          // direct child index -> nesting depth of its statement
  std::map<int, int> child_depth_else_if;  // same for the NLE reading
};

namespace detail {

// A statement parser over significant tokens. `else if` never adds depth;
// for the else-if reading, `else { if ... }` with the `if` as the block's
// only statement is treated as `else if` too.
class StatementWalker {
 public:
  StatementWalker(const Inventory& inv, const FunctionInfo& fn) : inv_(inv), fn_(fn) {
    for (int c : fn.children) child_at_[inv.functions[c].first] = c;
  }

  BodyStructure run() {
    if (fn_.expression_body) {
      state_.s.statements = fn_.body_end > fn_.body_begin ? 1 : 0;
      mark(fn_.body_begin, fn_.body_end, 0, 0);
    } else {
      parse_list(fn_.body_begin, fn_.body_end, 0, 0);
    }
    // Children in parameter defaults sit at depth 0.
    mark(fn_.params_begin, fn_.params_end, 0, 0);
    return state_.s;
  }

 private:
  struct State {
    BodyStructure s;
  };

  const Inventory& inv_;
  const FunctionInfo& fn_;
  std::map<std::size_t, int> child_at_;
  State state_;

  const Token& tok(std::size_t i) const { return inv_.sig(i); }
  std::size_t close_of(std::size_t i, std::size_t hi) const {
    const auto m = inv_.match[i];
    return m == js::npos ? i : std::min(m, hi);
  }
  static bool opens(const Token& t) { return t.is_punct("(") || t.is_punct("[") || t.is_punct("{"); }

  void mark(std::size_t lo, std::size_t hi, int d, int e) {
    for (auto it = child_at_.lower_bound(lo); it != child_at_.end() && it->first < hi; ++it) {
      state_.s.child_depth.try_emplace(it->second, d);
      state_.s.child_depth_else_if.try_emplace(it->second, e);
    }
  }

  void enter(int d, int e) {
    state_.s.nesting = std::max(state_.s.nesting, d);
    state_.s.nesting_else_if = std::max(state_.s.nesting_else_if, e);
  }

  void parse_list(std::size_t lo, std::size_t hi, int d, int e) {
    std::size_t i = lo;
    while (i < hi) i = parse_statement(i, hi, d, e);
  }

  std::size_t body(std::size_t k, std::size_t hi, int d, int e) {
    if (k >= hi) return k;
    enter(d + 1, e + 1);
    return parse_statement(k, hi, d + 1, e + 1);
  }

  // Skips a parenthesised header like `(cond)` and marks it; returns the
  // index after it.
  std::size_t header(std::size_t k, std::size_t hi, int d, int e) {
    if (k < hi && tok(k).is_punct("(")) {
      const auto close = close_of(k, hi);
      mark(k, close + 1, d, e);
      return close + 1;
    }
    return k;
  }

  std::size_t expression_statement(std::size_t i, std::size_t hi, int d, int e) {
    ++state_.s.statements;
    const auto& first = tok(i);
    const bool restricted = first.is_keyword("return") || first.is_keyword("break") ||
                            first.is_keyword("continue") || first.is_keyword("throw");
    std::size_t k = opens(first) ? close_of(i, hi) + 1 : i + 1;
    std::size_t end = hi;
    while (k < hi) {
      const auto& t = tok(k);
      if (t.is_punct(";")) {
        end = k + 1;
        break;
      }
      if (t.is_punct("}") || t.is_punct(")") || t.is_punct("]")) {
        end = k;
        break;
      }
      if (restricted && k == i + 1 && t.newline_before) {
        end = k;
        break;
      }
      if (js::asi_break(tok(k - 1), t)) {
        end = k;
        break;
      }
      k = opens(t) ? close_of(k, hi) + 1 : k + 1;
    }
    end = std::max(end, i + 1);
    mark(i, end, d, e);
    return end;
  }

  bool single_if_block(std::size_t b, std::size_t hi) {
    if (b >= hi || !tok(b).is_punct("{") || !tok(b + 1).is_keyword("if")) return false;
    const auto close = close_of(b, hi);
    const State saved = state_;
    const auto end = parse_statement(b + 1, close, 0, 0);
    state_ = saved;
    return end == close;
  }

  std::size_t parse_if(std::size_t i, std::size_t hi, int d, int e) {
    ++state_.s.statements;
    std::size_t k = header(i + 1, hi, d, e);
    k = body(k, hi, d, e);
    if (k < hi && tok(k).is_keyword("else")) {
      const auto after = k + 1;
      if (after < hi && tok(after).is_keyword("if")) {
        k = parse_if(after, hi, d, e);
      } else if (single_if_block(after, hi)) {
        const auto close = close_of(after, hi);
        enter(d + 1, e);
        parse_if(after + 1, close, d + 1, e);
        k = close + 1;
      } else {
        k = body(after, hi, d, e);
      }
    }
    return k;
  }

  std::size_t parse_switch(std::size_t i, std::size_t hi, int d, int e) {
    ++state_.s.statements;
    std::size_t k = header(i + 1, hi, d, e);
    if (k >= hi || !tok(k).is_punct("{")) return k;
    const auto close = close_of(k, hi);
    enter(d + 1, e + 1);
    std::size_t j = k + 1;
    while (j < close) {
      if (tok(j).is_keyword("case")) {
        std::size_t c = j + 1;
        int pending = 0;
        while (c < close) {
          const auto& t = tok(c);
          if (opens(t)) {
            c = close_of(c, close) + 1;
            continue;
          }
          if (t.is_op("?")) ++pending;
          if (t.is_op(":")) {
            if (pending == 0) break;
            --pending;
          }
          ++c;
        }
        mark(j, c + 1, d, e);
        j = c + 1;
      } else if (tok(j).is_keyword("default") && tok(j + 1).is_op(":")) {
        j += 2;
      } else {
        j = parse_statement(j, close, d + 1, e + 1);
      }
    }
    return close + 1;
  }

  std::size_t parse_statement(std::size_t i, std::size_t hi, int d, int e) {
    if (i >= hi) return hi;
    const auto& t = tok(i);

    if (auto it = child_at_.find(i); it != child_at_.end()) {
      const auto& child = inv_.functions[it->second];
      if (child.kind == js::FunctionKind::Declaration) {
        ++state_.s.statements;
        mark(i, i + 1, d, e);
        return std::max(child.last + 1, i + 1);
      }
    }
    if (t.is_punct("{")) {
      const auto close = close_of(i, hi);
      parse_list(i + 1, close, d, e);
      return close + 1;
    }
    if (t.is_punct(";")) return i + 1;

    if (t.kind == TokenKind::Keyword) {
      const auto& w = t.lexeme;
      if (w == "if") return parse_if(i, hi, d, e);
      if (w == "for" || w == "while" || w == "with") {
        ++state_.s.statements;
        std::size_t k = i + 1;
        if (tok(k).is_keyword("await")) ++k;
        k = header(k, hi, d, e);
        return body(k, hi, d, e);
      }
      if (w == "do") {
        ++state_.s.statements;
        std::size_t k = body(i + 1, hi, d, e);
        if (k < hi && tok(k).is_keyword("while")) {
          k = header(k + 1, hi, d, e);
          if (k < hi && tok(k).is_punct(";")) ++k;
        }
        return k;
      }
      if (w == "switch") return parse_switch(i, hi, d, e);
      if (w == "try") {
        ++state_.s.statements;
        std::size_t k = body(i + 1, hi, d, e);
        while (k < hi && (tok(k).is_keyword("catch") || tok(k).is_keyword("finally"))) {
          k = header(k + 1, hi, d, e);
          k = body(k, hi, d, e);
        }
        return k;
      }
      if (w == "class") {
        ++state_.s.statements;
        std::size_t k = i + 1;
        while (k < hi && !tok(k).is_punct("{")) k = opens(tok(k)) ? close_of(k, hi) + 1 : k + 1;
        const auto end = k < hi ? close_of(k, hi) + 1 : hi;
        mark(i, end, d, e);
        return end;
      }
      if (w == "else" || w == "case" || w == "default" || w == "catch" || w == "finally") return i + 1;
    }
    if (t.kind == TokenKind::Identifier && tok(i + 1).is_op(":") && i + 1 < hi) {
      return parse_statement(i + 2, hi, d, e);  // label
    }
    return expression_statement(i, hi, d, e);
  }
};

}  // namespace detail

inline BodyStructure body_structure(const Inventory& inv, const FunctionInfo& fn) {
  return detail::StatementWalker(inv, fn).run();
}

}  // namespace jsvp::metrics
