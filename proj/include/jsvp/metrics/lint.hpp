#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/js/functions.hpp"

namespace jsvp::metrics {

enum class Severity { Info, Minor, Major, Critical, Blocker, Off };

inline Severity parse_severity(const std::string& name) {
  if (name == "info") return Severity::Info;
  if (name == "minor") return Severity::Minor;
  if (name == "major") return Severity::Major;
  if (name == "critical") return Severity::Critical;
  if (name == "blocker") return Severity::Blocker;
  if (name == "off") return Severity::Off;
  throw Error(ErrorCode::Config, "unknown severity '" + name + "'");
}

inline const char* to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Minor: return "minor";
    case Severity::Major: return "major";
    case Severity::Critical: return "critical";
    case Severity::Blocker: return "blocker";
    case Severity::Off: return "off";
  }
  return "off";
}

struct LintRuleset {
  std::map<std::string, Severity> severity = {
      {"no-eval", Severity::Critical},       {"no-new-func", Severity::Critical},
      {"no-implied-eval", Severity::Critical}, {"eqeqeq", Severity::Minor},
      {"no-empty-catch", Severity::Minor},   {"no-proto", Severity::Minor},
      {"no-with", Severity::Major},          {"no-cond-assign", Severity::Major},
      {"no-debugger", Severity::Major},      {"no-caller", Severity::Major},
      {"no-unused-params", Severity::Info},  {"no-var", Severity::Info},
      {"no-alert", Severity::Info},          {"no-inner-html", Severity::Blocker},
      {"no-document-write", Severity::Blocker}};

  // Reads `lint.<rule> = <severity>` keys.
  static LintRuleset from_config(const Config& cfg) {
    LintRuleset r;
    for (const auto& key : cfg.keys_with_prefix("lint.")) {
      const auto rule = key.substr(5);
      if (!r.severity.count(rule)) throw Error(ErrorCode::Config, "unknown lint rule '" + rule + "'");
      r.severity[rule] = parse_severity(*cfg.get(key));
    }
    return r;
  }
};

struct LintHit {
  std::string rule;
  std::size_t token = 0;
};

// Warnings per bucket: info, minor, major, critical, blocker.
using WarningCounts = std::array<double, 5>;

namespace detail {

inline bool member_access(const js::Inventory& inv, std::size_t p) {
  return p > 0 && (inv.sig(p - 1).is_op(".") || inv.sig(p - 1).is_op("?."));
}

inline bool global_call(const js::Inventory& inv, std::size_t p, std::string_view name) {
  if (!inv.sig(p).is_ident(name) || !inv.sig(p + 1).is_punct("(")) return false;
  if (!member_access(inv, p)) return true;
  return p >= 2 && inv.sig(p - 2).is_ident("window");
}

// Simple parameter names (not destructured) of f.
inline std::vector<std::size_t> simple_params(const js::Inventory& inv, const js::FunctionInfo& f) {
  std::vector<std::size_t> out;
  if (f.params_end <= f.params_begin) return out;
  auto lo = f.params_begin, hi = f.params_end;
  if (inv.sig(lo).is_punct("(")) ++lo;
  if (hi > lo && inv.sig(hi - 1).is_punct(")")) --hi;
  int depth = 0;
  for (auto p = lo; p < hi; ++p) {
    const auto& t = inv.sig(p);
    if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) ++depth;
    if (t.is_punct(")") || t.is_punct("]") || t.is_punct("}")) --depth;
    if (depth != 0 || t.kind != js::TokenKind::Identifier) continue;
    const bool starts = p == lo || inv.sig(p - 1).is_punct(",") || inv.sig(p - 1).is_op("...");
    if (starts) out.push_back(p);
  }
  return out;
}

}  // namespace detail

// Rule hits in f's own tokens.
inline std::vector<LintHit> lint_hits(const js::Inventory& inv, const js::FunctionInfo& f) {
  std::vector<LintHit> hits;
  const auto own = inv.own_tokens(f);
  for (std::size_t p : own) {
    const auto& t = inv.sig(p);
    const auto& next = inv.sig(p + 1);
    if (t.kind == js::TokenKind::Identifier) {
      if (!detail::member_access(inv, p) && t.lexeme == "eval" && next.is_punct("(")) hits.push_back({"no-eval", p});
      if (t.lexeme == "Function" && p > 0 && inv.sig(p - 1).is_keyword("new")) hits.push_back({"no-new-func", p});
      if ((detail::global_call(inv, p, "setTimeout") || detail::global_call(inv, p, "setInterval") ||
           detail::global_call(inv, p, "execScript")) &&
          inv.sig(p + 2).kind == js::TokenKind::Literal &&
          (inv.sig(p + 2).lexeme.front() == '"' || inv.sig(p + 2).lexeme.front() == '\'' ||
           inv.sig(p + 2).lexeme.front() == '`')) {
        hits.push_back({"no-implied-eval", p});
      }
      if (detail::member_access(inv, p) && t.lexeme == "__proto__") hits.push_back({"no-proto", p});
      if (detail::member_access(inv, p) && (t.lexeme == "callee" || t.lexeme == "caller") && p >= 2 &&
          inv.sig(p - 2).is_ident("arguments")) {
        hits.push_back({"no-caller", p});
      }
      if (detail::global_call(inv, p, "alert") || detail::global_call(inv, p, "confirm") ||
          detail::global_call(inv, p, "prompt")) {
        hits.push_back({"no-alert", p});
      }
      if (detail::member_access(inv, p) && (t.lexeme == "innerHTML" || t.lexeme == "outerHTML") &&
          (next.is_op("=") || next.is_op("+="))) {
        hits.push_back({"no-inner-html", p});
      }
      if (detail::member_access(inv, p) && (t.lexeme == "write" || t.lexeme == "writeln") && p >= 2 &&
          inv.sig(p - 2).is_ident("document") && next.is_punct("(")) {
        hits.push_back({"no-document-write", p});
      }
    } else if (t.kind == js::TokenKind::Operator) {
      if (t.lexeme == "==" || t.lexeme == "!=") hits.push_back({"eqeqeq", p});
    } else if (t.kind == js::TokenKind::Keyword) {
      if (t.lexeme == "with") hits.push_back({"no-with", p});
      if (t.lexeme == "debugger") hits.push_back({"no-debugger", p});
      if (t.lexeme == "var") hits.push_back({"no-var", p});
      if (t.lexeme == "catch") {
        auto b = p + 1;
        if (inv.sig(b).is_punct("(") && inv.match[b] != js::npos) b = inv.match[b] + 1;
        if (inv.sig(b).is_punct("{") && inv.sig(b + 1).is_punct("}")) hits.push_back({"no-empty-catch", p});
      }
      if ((t.lexeme == "if" || t.lexeme == "while") && next.is_punct("(") && inv.match[p + 1] != js::npos) {
        // an assignment directly in the condition; extra parentheses opt out
        int depth = 0;
        for (auto q = p + 2; q < inv.match[p + 1]; ++q) {
          const auto& u = inv.sig(q);
          if (u.is_punct("(") || u.is_punct("[") || u.is_punct("{")) ++depth;
          if (u.is_punct(")") || u.is_punct("]") || u.is_punct("}")) --depth;
          if (depth == 0 && u.is_op("=")) {
            hits.push_back({"no-cond-assign", q});
            break;
          }
        }
      }
    }
  }

  std::set<std::string> used;
  for (auto p = f.body_begin; p < f.body_end; ++p) {
    if (inv.sig(p).kind == js::TokenKind::Identifier && !detail::member_access(inv, p)) used.insert(inv.sig(p).lexeme);
  }
  for (auto p = f.params_begin; p < f.params_end; ++p) {
    // defaults may refer to earlier parameters
    if (inv.sig(p).kind == js::TokenKind::Identifier && p > f.params_begin && !inv.sig(p - 1).is_punct(",") &&
        !inv.sig(p - 1).is_punct("(") && !inv.sig(p - 1).is_op("...")) {
      used.insert(inv.sig(p).lexeme);
    }
  }
  for (std::size_t p : detail::simple_params(inv, f)) {
    if (!used.count(inv.sig(p).lexeme)) hits.push_back({"no-unused-params", p});
  }
  return hits;
}

inline WarningCounts lint(const js::Inventory& inv, const js::FunctionInfo& f, const LintRuleset& rules = {}) {
  WarningCounts counts{};
  for (const auto& hit : lint_hits(inv, f)) {
    const auto sev = rules.severity.at(hit.rule);
    if (sev != Severity::Off) counts[static_cast<std::size_t>(sev)] += 1;
  }
  return counts;
}

}  // namespace jsvp::metrics
