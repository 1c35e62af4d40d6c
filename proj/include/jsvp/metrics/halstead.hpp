#pragma once

#include <cmath>
#include <set>
#include <span>
#include <string>

#include "jsvp/js/lexer.hpp"

namespace jsvp::metrics {

struct Halstead {
  double distinct_operators = 0;  // HOR_D, n1
  double total_operators = 0;     // HOR_T, N1
  double distinct_operands = 0;   // HON_D, n2
  double total_operands = 0;      // HON_T, N2
  double length = 0;              // HLEN
  double vocabulary = 0;          // HVOC
  double difficulty = 0;          // HDIFF
  double volume = 0;              // HVOL
  double effort = 0;              // HEFF
  double bugs = 0;                // HBUGS
  double time = 0;                // HTIME
};

enum class HalsteadRole { Operator, Operand, Ignored };

// Classification table. Operands: identifiers and literals. Operators:
// keywords, operator tokens, `;` and `,`, and bracket pairs counted once at
// the opening bracket as "()", "[]" or "{}". Closing brackets and comments
// are not counted.
inline HalsteadRole halstead_role(const js::Token& t, std::string* symbol = nullptr) {
  using js::TokenKind;
  switch (t.kind) {
    case TokenKind::Identifier:
    case TokenKind::Literal:
      if (symbol) *symbol = t.lexeme;
      return HalsteadRole::Operand;
    case TokenKind::Keyword:
    case TokenKind::Operator:
      if (symbol) *symbol = t.lexeme;
      return HalsteadRole::Operator;
    case TokenKind::Punctuation:
      if (t.lexeme == ";" || t.lexeme == ",") {
        if (symbol) *symbol = t.lexeme;
        return HalsteadRole::Operator;
      }
      if (t.lexeme == "(" || t.lexeme == "[" || t.lexeme == "{") {
        if (symbol) *symbol = t.lexeme + (t.lexeme == "(" ? ")" : t.lexeme == "[" ? "]" : "}");
        return HalsteadRole::Operator;
      }
      return HalsteadRole::Ignored;
    case TokenKind::Comment:
      return HalsteadRole::Ignored;
  }
  return HalsteadRole::Ignored;
}

inline Halstead halstead_from_counts(double n1, double N1, double n2, double N2) {
  Halstead h;
  h.distinct_operators = n1;
  h.total_operators = N1;
  h.distinct_operands = n2;
  h.total_operands = N2;
  h.length = N1 + N2;
  h.vocabulary = n1 + n2;
  h.volume = h.vocabulary > 0 ? h.length * std::log2(h.vocabulary) : 0.0;
  h.difficulty = n2 > 0 ? (n1 / 2.0) * (N2 / n2) : 0.0;
  h.effort = h.difficulty * h.volume;
  h.bugs = h.volume / 3000.0;
  h.time = h.effort / 18.0;
  return h;
}

template <typename Tokens>
Halstead halstead(const Tokens& tokens) {
  std::set<std::string> operators, operands;
  double N1 = 0, N2 = 0;
  std::string symbol;
  for (const js::Token& t : tokens) {
    switch (halstead_role(t, &symbol)) {
      case HalsteadRole::Operator:
        operators.insert(symbol);
        ++N1;
        break;
      case HalsteadRole::Operand:
        operands.insert(symbol);
        ++N2;
        break;
      case HalsteadRole::Ignored:
        break;
    }
  }
  return halstead_from_counts(static_cast<double>(operators.size()), N1, static_cast<double>(operands.size()), N2);
}

}  // namespace jsvp::metrics
