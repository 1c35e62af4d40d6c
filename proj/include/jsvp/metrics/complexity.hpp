#pragma once

#include <set>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/js/functions.hpp"
#include "jsvp/metrics/structure.hpp"

namespace jsvp::metrics {

// Which constructs add a decision point to McCC. `if`, loops and `do` always
// count; the rest can be switched off. Short-circuit operators are off by
// default.
struct McCCOptions {
  bool count_case = true;
  bool count_catch = true;
  bool count_ternary = true;
  bool count_logical = false;  // && || ??

  static McCCOptions from_config(const Config& cfg) {
    McCCOptions o;
    o.count_case = cfg.get_bool("mccc.case", o.count_case);
    o.count_catch = cfg.get_bool("mccc.catch", o.count_catch);
    o.count_ternary = cfg.get_bool("mccc.ternary", o.count_ternary);
    o.count_logical = cfg.get_bool("mccc.logical", o.count_logical);
    return o;
  }
};

inline bool is_decision(const js::Token& t, std::size_t pos, const std::set<std::size_t>& tails,
                        const McCCOptions& opt) {
  if (t.kind == js::TokenKind::Keyword) {
    const auto& w = t.lexeme;
    if (w == "if" || w == "for" || w == "do") return true;
    if (w == "while") return !tails.count(pos);
    if (w == "case") return opt.count_case;
    if (w == "catch") return opt.count_catch;
    return false;
  }
  if (t.kind == js::TokenKind::Operator) {
    if (t.lexeme == "?") return opt.count_ternary;
    if (t.lexeme == "&&" || t.lexeme == "||" || t.lexeme == "??") return opt.count_logical;
  }
  return false;
}

// 1 + decision points among the given significant-token positions.
template <typename Positions>
int mccc(const js::Inventory& inv, const Positions& positions, const std::set<std::size_t>& tails,
         const McCCOptions& opt = {}) {
  int n = 1;
  for (std::size_t p : positions) n += is_decision(inv.sig(p), p, tails, opt) ? 1 : 0;
  return n;
}

struct Nesting {
  int nl = 0;
  int nle = 0;
};

// NL and NLE of every function in the inventory. A nested function counts as
// one more level below the statement that holds it.
inline std::vector<Nesting> nesting_levels(const js::Inventory& inv, const std::vector<BodyStructure>& bodies) {
  std::vector<Nesting> out(inv.functions.size());
  for (std::size_t k = inv.functions.size(); k-- > 0;) {
    const auto& b = bodies[k];
    Nesting n{b.nesting, b.nesting_else_if};
    for (int c : inv.functions[k].children) {
      const auto d = b.child_depth.count(c) ? b.child_depth.at(c) : 0;
      const auto e = b.child_depth_else_if.count(c) ? b.child_depth_else_if.at(c) : 0;
      n.nl = std::max(n.nl, d + 1 + out[c].nl);
      n.nle = std::max(n.nle, e + 1 + out[c].nle);
    }
    out[k] = n;
  }
  return out;
}

}  // namespace jsvp::metrics
