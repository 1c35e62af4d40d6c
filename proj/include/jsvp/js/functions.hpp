#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "jsvp/js/lexer.hpp"

namespace jsvp::js {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct FunctionKey {
  std::string file_path;
  std::string qualified_name;
  SourceSpan span;

  friend bool operator==(const FunctionKey&, const FunctionKey&) = default;
  friend bool operator<(const FunctionKey& a, const FunctionKey& b) {
    if (a.file_path != b.file_path) return a.file_path < b.file_path;
    if (a.span.start_line != b.span.start_line) return a.span.start_line < b.span.start_line;
    if (a.span.start_col != b.span.start_col) return a.span.start_col < b.span.start_col;
    return a.qualified_name < b.qualified_name;
  }
};

enum class FunctionKind { Declaration, Expression, Arrow, Method, Getter, Setter };

// One function of an inventory. Token positions index Inventory::significant
// (comments excluded); ranges are half-open unless noted.
struct FunctionInfo {
  FunctionKey key;
  std::string name;  // simple name; empty when anonymous
  FunctionKind kind = FunctionKind::Declaration;
  std::size_t first = 0;  // inclusive
  std::size_t last = 0;   // inclusive
  std::size_t name_token = npos;
  std::size_t params_begin = 0, params_end = 0;
  std::size_t body_begin = 0, body_end = 0;
  bool expression_body = false;
  int param_count = 0;
  int parent = -1;
  std::vector<int> children;
};

struct Inventory {
  std::string path;
  TokenStream stream;
  std::vector<std::size_t> significant;  // indices into stream.tokens
  std::vector<std::size_t> match;        // bracket partner per significant index
  std::vector<FunctionInfo> functions;   // preorder, i.e. sorted by start
  std::vector<Diagnostic> diagnostics;   // lexer and parser diagnostics
  bool partial = false;

  std::size_t size() const { return significant.size(); }

  const Token& sig(std::size_t i) const {
    static const Token kNone{TokenKind::Punctuation, "", {}, 0, false};
    return i < significant.size() ? stream.tokens[significant[i]] : kNone;
  }

  std::vector<FunctionKey> keys() const {
    std::vector<FunctionKey> out;
    out.reserve(functions.size());
    for (const auto& f : functions) out.push_back(f.key);
    return out;
  }

  // Significant-token positions inside f that are not inside a nested function.
  std::vector<std::size_t> own_tokens(const FunctionInfo& f) const {
    std::vector<std::size_t> out;
    std::size_t i = f.first;
    std::size_t child = 0;
    while (i <= f.last && i < size()) {
      if (child < f.children.size() && functions[f.children[child]].first == i) {
        i = functions[f.children[child]].last + 1;
        ++child;
        continue;
      }
      out.push_back(i++);
    }
    return out;
  }

  // Innermost function whose line span contains `line`, or -1.
  int innermost_at_line(int line) const {
    int best = -1;
    for (std::size_t i = 0; i < functions.size(); ++i) {
      const auto& s = functions[i].key.span;
      if (s.start_line <= line && line <= s.end_line) best = static_cast<int>(i);
    }
    return best;
  }
};

inline std::string anonymous_name(const SourceSpan& at) {
  return "<anon@" + std::to_string(at.start_line) + ":" + std::to_string(at.start_col) + ">";
}

// Automatic semicolon insertion, approximated: a line break ends a statement
// when the previous token can end an expression and the next can start one.
inline bool ends_expression(const Token& t) {
  return t.kind == TokenKind::Identifier || t.kind == TokenKind::Literal || t.is_punct(")") ||
         t.is_punct("]") || t.is_punct("}") || t.is_keyword("this") || t.is_keyword("super") ||
         t.is_op("++") || t.is_op("--");
}
inline bool begins_statement(const Token& t) {
  if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Literal) return true;
  return t.kind == TokenKind::Keyword && t.lexeme != "in" && t.lexeme != "instanceof";
}
inline bool asi_break(const Token& prev, const Token& next) {
  return next.newline_before && ends_expression(prev) && begins_statement(next);
}

namespace detail {

class FunctionScanner {
 public:
  explicit FunctionScanner(Inventory& inv) : inv_(inv) {}

  void run() {
    build_matches();
    scan(0, inv_.size(), Context{Ctx::Top, -1, -1});
    assign_names();
  }

 private:
  enum class Ctx { Top, Block, Object, Class, Paren, Bracket, Expr };
  struct Context {
    Ctx kind;
    int fn;
    int scope;
  };
  struct ScopeNode {
    std::string name;
    int parent;
  };

  Inventory& inv_;
  std::vector<ScopeNode> scopes_;
  std::vector<int> fn_scope_;

  const Token& tok(std::size_t i) const { return inv_.sig(i); }
  std::size_t n() const { return inv_.size(); }
  std::size_t partner(std::size_t i) const { return i < inv_.match.size() ? inv_.match[i] : n(); }

  void parse_error(std::size_t at, std::string message) {
    const auto& t = tok(at);
    inv_.diagnostics.push_back({"ParseError", std::move(message), t.span.start_line, t.span.start_col});
    inv_.partial = true;
  }

  static bool opens(const Token& t) { return t.is_punct("(") || t.is_punct("[") || t.is_punct("{"); }
  static bool closes(const Token& t) { return t.is_punct(")") || t.is_punct("]") || t.is_punct("}"); }
  static bool pairs(const Token& o, const Token& c) {
    return (o.lexeme == "(" && c.lexeme == ")") || (o.lexeme == "[" && c.lexeme == "]") ||
           (o.lexeme == "{" && c.lexeme == "}");
  }

  // Brackets are paired by a stack. A closer that skips over unclosed
  // openers closes them implicitly; a stray closer is ignored; openers left
  // at end of input run to the end. Each recovery is a ParseError.
  void build_matches() {
    inv_.match.assign(n(), npos);
    std::vector<std::size_t> stack;
    for (std::size_t k = 0; k < n(); ++k) {
      const auto& t = tok(k);
      if (opens(t)) {
        stack.push_back(k);
      } else if (closes(t)) {
        auto it = std::find_if(stack.rbegin(), stack.rend(), [&](std::size_t o) { return pairs(tok(o), t); });
        if (it == stack.rend()) {
          parse_error(k, "unmatched '" + t.lexeme + "'");
          continue;
        }
        while (!stack.empty() && stack.back() != *it) {
          parse_error(stack.back(), "'" + tok(stack.back()).lexeme + "' is never closed");
          inv_.match[stack.back()] = k;
          stack.pop_back();
        }
        inv_.match[k] = stack.back();
        inv_.match[stack.back()] = k;
        stack.pop_back();
      }
    }
    for (auto o : stack) {
      parse_error(o, "'" + tok(o).lexeme + "' is never closed");
      inv_.match[o] = n();
    }
  }

  // End (exclusive) of an arrow function's expression body starting at k0.
  std::size_t expression_end(std::size_t k0, std::size_t hi) const {
    int pending_conditional = 0;
    std::size_t k = k0;
    while (k < hi) {
      const auto& t = tok(k);
      if (k > k0 && asi_break(tok(k - 1), t)) return k;
      if (opens(t)) {
        const auto close = partner(k);
        if (close >= hi) return hi;
        k = close + 1;
        continue;
      }
      if (closes(t) || t.is_punct(",") || t.is_punct(";")) return k;
      if (t.is_op("?")) ++pending_conditional;
      if (t.is_op(":")) {
        if (pending_conditional == 0) return k;
        --pending_conditional;
      }
      ++k;
    }
    return hi;
  }

  static std::string unquote(const Token& t) {
    if (t.kind == TokenKind::Literal && t.lexeme.size() >= 2 && (t.lexeme[0] == '"' || t.lexeme[0] == '\'')) {
      return t.lexeme.substr(1, t.lexeme.size() - 2);
    }
    return t.lexeme;
  }

  static bool property_name(const Token& t) {
    return t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword ||
           (t.kind == TokenKind::Literal && !t.lexeme.empty() && t.lexeme[0] != '`' && t.lexeme[0] != '/');
  }

  // Name for an anonymous function or class from `name = ...` or an
  // object-literal `name: ...` just before `start`.
  std::string inferred_name(std::size_t start, const Context& ctx) const {
    if (start < 2) return {};
    const auto& p = tok(start - 1);
    const auto& q = tok(start - 2);
    if (p.is_op("=") && q.kind == TokenKind::Identifier) return q.lexeme;
    if (p.is_op(":") && ctx.kind == Ctx::Object && property_name(q)) return unquote(q);
    return {};
  }

  bool object_brace(std::size_t i, const Context& ctx) const {
    if (i == 0) return false;
    const auto& p = tok(i - 1);
    switch (p.kind) {
      case TokenKind::Punctuation: return p.lexeme == "(" || p.lexeme == "[" || p.lexeme == ",";
      case TokenKind::Operator:
        if (p.lexeme == "=>") return false;
        if (p.lexeme == ":") {
          return ctx.kind == Ctx::Object || ctx.kind == Ctx::Paren || ctx.kind == Ctx::Bracket ||
                 ctx.kind == Ctx::Expr;
        }
        return true;
      case TokenKind::Keyword: {
        static const std::set<std::string_view> kExpr = {"return", "typeof", "case",  "throw", "new",
                                                         "void",   "delete", "yield", "await", "in",
                                                         "instanceof"};
        return kExpr.count(p.lexeme) > 0;
      }
      default: return false;
    }
  }

  int add_scope(std::string name, int parent) {
    scopes_.push_back({std::move(name), parent});
    return static_cast<int>(scopes_.size()) - 1;
  }

  int count_params(std::size_t lo, std::size_t hi) const {
    if (lo >= hi) return 0;
    int count = 1;
    for (std::size_t k = lo; k < hi; ++k) {
      if (opens(tok(k))) {
        const auto close = partner(k);
        if (close >= hi) break;
        k = close;
        continue;
      }
      if (tok(k).is_punct(",") && k + 1 < hi) ++count;  // trailing comma adds nothing
    }
    return count;
  }

  struct Pending {
    std::size_t start, last, name_token;
    std::size_t params_begin, params_end, body_begin, body_end;
    bool expression_body;
    FunctionKind kind;
    std::string name;
  };

  void add_function(Pending p, const Context& ctx, std::size_t hi) {
    FunctionInfo f;
    f.first = p.start;
    f.last = std::min(p.last, hi == 0 ? 0 : hi - 1);
    f.last = std::max(f.last, f.first);
    f.name = p.name;
    f.kind = p.kind;
    f.name_token = p.name_token;
    f.params_begin = p.params_begin;
    f.params_end = std::min(p.params_end, hi);
    f.body_begin = p.body_begin;
    f.body_end = std::min(p.body_end, hi);
    f.expression_body = p.expression_body;
    f.param_count = count_params(f.params_begin, f.params_end);
    f.parent = ctx.fn;
    f.key.file_path = inv_.path;
    const auto& a = tok(f.first).span;
    const auto& b = tok(f.last).span;
    f.key.span = {a.start_line, b.end_line, a.start_col, b.end_col};

    const int index = static_cast<int>(inv_.functions.size());
    if (f.parent >= 0) inv_.functions[f.parent].children.push_back(index);
    const int scope = add_scope(f.name.empty() ? anonymous_name(f.key.span) : f.name, ctx.scope);
    fn_scope_.push_back(scope);
    const bool expr = f.expression_body;
    const auto pb = f.params_begin, pe = f.params_end, bb = f.body_begin, be = f.body_end;
    inv_.functions.push_back(std::move(f));

    if (pb < pe) scan(pb, pe, Context{Ctx::Paren, index, scope});
    if (bb < be) scan(bb, be, Context{expr ? Ctx::Expr : Ctx::Block, index, scope});
  }

  std::optional<std::size_t> function_keyword(std::size_t start, std::size_t kw, std::size_t hi, const Context& ctx) {
    std::size_t j = kw + 1;
    if (tok(j).is_op("*")) ++j;
    std::size_t name_tok = npos;
    if (tok(j).kind == TokenKind::Identifier) name_tok = j++;
    if (j >= hi || !tok(j).is_punct("(")) return std::nullopt;
    const auto pclose = partner(j);
    if (pclose >= hi) return std::nullopt;
    const auto brace = pclose + 1;
    if (brace >= hi || !tok(brace).is_punct("{")) return std::nullopt;
    const auto bclose = partner(brace);

    FunctionKind kind = FunctionKind::Expression;
    if (name_tok != npos) {
      const Token& prev = start == 0 ? tok(n()) : tok(start - 1);
      if (start == 0 || prev.is_punct(";") || prev.is_punct("{") || prev.is_punct("}") ||
          prev.is_keyword("export") || prev.is_keyword("default") || prev.is_keyword("else") ||
          prev.is_punct(")")) {
        kind = FunctionKind::Declaration;
      }
    }
    std::string name = name_tok != npos ? tok(name_tok).lexeme : inferred_name(start, ctx);
    add_function({start, bclose, name_tok, j + 1, pclose, brace + 1, bclose, false, kind, std::move(name)}, ctx, hi);
    return std::min(bclose, hi) + 1;
  }

  std::optional<std::size_t> arrow(std::size_t start, std::size_t p, std::size_t hi, const Context& ctx) {
    std::size_t params_begin = p, params_end = p + 1, arrow_tok = p + 1;
    if (tok(p).is_punct("(")) {
      params_begin = p + 1;
      params_end = partner(p);
      arrow_tok = params_end + 1;
    }
    if (arrow_tok >= hi || !tok(arrow_tok).is_op("=>")) return std::nullopt;
    std::string name = inferred_name(start, ctx);
    if (tok(arrow_tok + 1).is_punct("{") && arrow_tok + 1 < hi) {
      const auto brace = arrow_tok + 1;
      const auto close = partner(brace);
      add_function({start, close, npos, params_begin, params_end, brace + 1, close, false, FunctionKind::Arrow,
                    std::move(name)},
                   ctx, hi);
      return std::min(close, hi) + 1;
    }
    const auto end = expression_end(arrow_tok + 1, hi);
    const auto last = end > arrow_tok + 1 ? end - 1 : arrow_tok;
    add_function({start, last, npos, params_begin, params_end, arrow_tok + 1, end, true, FunctionKind::Arrow,
                  std::move(name)},
                 ctx, hi);
    return end;
  }

  bool name_start(std::size_t k) const {
    const auto& t = tok(k);
    return property_name(t) || t.is_punct("[");
  }

  bool member_start(std::size_t i, std::size_t lo, const Context& ctx) const {
    if (i == lo) return true;
    const auto& prev = tok(i - 1);
    if (ctx.kind == Ctx::Object) return prev.is_punct(",");
    return prev.is_punct(";") || prev.is_punct("}") || tok(i).newline_before;
  }

  std::optional<std::size_t> method(std::size_t i, std::size_t hi, const Context& ctx) {
    std::size_t j = i;
    FunctionKind kind = FunctionKind::Method;
    if (ctx.kind == Ctx::Class && tok(j).is_keyword("static") && name_start(j + 1)) ++j;
    if (tok(j).is_ident("async") && !tok(j + 1).newline_before && (name_start(j + 1) || tok(j + 1).is_op("*"))) ++j;
    if ((tok(j).is_ident("get") || tok(j).is_ident("set")) && name_start(j + 1)) {
      kind = tok(j).lexeme == "get" ? FunctionKind::Getter : FunctionKind::Setter;
      ++j;
    }
    if (tok(j).is_op("*")) ++j;
    std::size_t name_end = j;
    std::string name;
    std::size_t name_tok = npos;
    if (tok(j).is_punct("[")) {
      name_end = partner(j);
      if (name_end >= hi) return std::nullopt;
    } else if (property_name(tok(j))) {
      name = unquote(tok(j));
      name_tok = j;
    } else {
      return std::nullopt;
    }
    const auto paren = name_end + 1;
    if (paren >= hi || !tok(paren).is_punct("(")) return std::nullopt;
    const auto pclose = partner(paren);
    if (pclose >= hi || !tok(pclose + 1).is_punct("{") || pclose + 1 >= hi) return std::nullopt;
    const auto brace = pclose + 1;
    const auto bclose = partner(brace);
    if (name_end != j) scan(j + 1, name_end, Context{Ctx::Bracket, ctx.fn, ctx.scope});
    add_function({i, bclose, name_tok, paren + 1, pclose, brace + 1, bclose, false, kind, std::move(name)}, ctx, hi);
    return std::min(bclose, hi) + 1;
  }

  std::optional<std::size_t> try_function(std::size_t i, std::size_t lo, std::size_t hi, const Context& ctx) {
    const auto& t = tok(i);
    if (t.is_ident("async") && !tok(i + 1).newline_before) {
      if (tok(i + 1).is_keyword("function")) return function_keyword(i, i + 1, hi, ctx);
      if (tok(i + 1).kind == TokenKind::Identifier && tok(i + 2).is_op("=>")) return arrow(i, i + 1, hi, ctx);
      if (tok(i + 1).is_punct("(") && partner(i + 1) < hi && tok(partner(i + 1) + 1).is_op("=>")) {
        return arrow(i, i + 1, hi, ctx);
      }
    }
    if (t.is_keyword("function")) {
      if (auto r = function_keyword(i, i, hi, ctx)) return r;
    }
    if (t.kind == TokenKind::Identifier && tok(i + 1).is_op("=>") && i + 1 < hi) return arrow(i, i, hi, ctx);
    if (t.is_punct("(") && partner(i) < hi && tok(partner(i) + 1).is_op("=>")) return arrow(i, i, hi, ctx);
    if ((ctx.kind == Ctx::Object || ctx.kind == Ctx::Class) && member_start(i, lo, ctx)) return method(i, hi, ctx);
    return std::nullopt;
  }

  std::size_t class_decl(std::size_t i, std::size_t hi, const Context& ctx) {
    std::size_t j = i + 1;
    std::string name;
    if (tok(j).kind == TokenKind::Identifier) {
      name = tok(j).lexeme;
      ++j;
    } else {
      name = inferred_name(i, ctx);
    }
    if (name.empty()) {
      const auto& s = tok(i).span;
      name = "<class@" + std::to_string(s.start_line) + ":" + std::to_string(s.start_col) + ">";
    }
    while (j < hi && !tok(j).is_punct("{")) {
      if (tok(j).is_punct("(") || tok(j).is_punct("[")) {
        const auto close = std::min(partner(j), hi);
        scan(j + 1, close, Context{Ctx::Paren, ctx.fn, ctx.scope});
        j = close + 1;
        continue;
      }
      ++j;
    }
    if (j >= hi) return j;
    const auto close = std::min(partner(j), hi);
    scan(j + 1, close, Context{Ctx::Class, ctx.fn, add_scope(name, ctx.scope)});
    return close + 1;
  }

  void scan(std::size_t lo, std::size_t hi, Context ctx) {
    std::size_t i = lo;
    while (i < hi) {
      if (auto next = try_function(i, lo, hi, ctx)) {
        i = *next;
        continue;
      }
      const auto& t = tok(i);
      if (t.is_keyword("class")) {
        i = class_decl(i, hi, ctx);
        continue;
      }
      if (opens(t)) {
        const auto close = std::min(partner(i), hi);
        Context inner{Ctx::Paren, ctx.fn, ctx.scope};
        if (t.lexeme == "[") {
          inner.kind = Ctx::Bracket;
        } else if (t.lexeme == "{") {
          if (object_brace(i, ctx)) {
            inner.kind = Ctx::Object;
            if (auto name = inferred_name(i, ctx); !name.empty()) inner.scope = add_scope(name, ctx.scope);
          } else {
            inner.kind = Ctx::Block;
          }
        }
        scan(i + 1, close, inner);
        i = close + 1;
        continue;
      }
      ++i;
    }
  }

  void assign_names() {
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < inv_.functions.size(); ++i) {
      std::vector<std::string> parts;
      for (int s = fn_scope_[i]; s >= 0; s = scopes_[s].parent) parts.push_back(scopes_[s].name);
      std::string qualified;
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!qualified.empty()) qualified += '.';
        qualified += *it;
      }
      const int count = ++seen[qualified];
      if (count > 1) qualified += "#" + std::to_string(count);
      inv_.functions[i].key.qualified_name = std::move(qualified);
    }
  }
};

}  // namespace detail

// Builds the function inventory of one file: declarations, expressions,
// arrows, object-literal and class methods, getters and setters. Nested
// functions are qualified by their enclosing functions, classes and named
// object literals. Bracket mismatches are recovered and reported; the
// inventory is still returned.
inline Inventory extract_inventory(std::string_view source, std::string path = {}) {
  Inventory inv;
  inv.path = std::move(path);
  inv.stream = tokenize(source);
  for (std::size_t i = 0; i < inv.stream.tokens.size(); ++i) {
    if (inv.stream.tokens[i].kind != TokenKind::Comment) inv.significant.push_back(i);
  }
  inv.diagnostics = inv.stream.diagnostics;
  inv.partial = inv.stream.partial;
  detail::FunctionScanner(inv).run();
  return inv;
}

inline std::vector<FunctionKey> extract_functions(std::string_view source, std::string path = {}) {
  return extract_inventory(source, std::move(path)).keys();
}

// True iff any of the 1-based `lines` falls inside the key's inclusive line span.
template <typename Lines>
bool span_overlaps(const FunctionKey& fk, const Lines& lines) {
  for (int line : lines) {
    if (fk.span.start_line <= line && line <= fk.span.end_line) return true;
  }
  return false;
}

inline nlohmann::json functions_json(const std::vector<FunctionKey>& keys) {
  auto out = nlohmann::json::array();
  for (const auto& k : keys) {
    out.push_back({{"path", k.file_path},
                   {"name", k.qualified_name},
                   {"start_line", k.span.start_line},
                   {"end_line", k.span.end_line}});
  }
  return out;
}

}  // namespace jsvp::js
