#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace jsvp::js {

// Lines are 1-based, columns are 0-based byte offsets. end_col is exclusive
// and refers to end_line.
struct SourceSpan {
  int start_line = 1;
  int end_line = 1;
  int start_col = 0;
  int end_col = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class TokenKind : std::uint8_t { Identifier, Literal, Keyword, Operator, Punctuation, Comment };

constexpr std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Literal: return "literal";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Comment: return "comment";
  }
  return "?";
}

struct Token {
  TokenKind kind = TokenKind::Punctuation;
  std::string lexeme;
  SourceSpan span;
  std::size_t offset = 0;       // byte offset of the first character
  bool newline_before = false;  // a line break separates it from the previous token

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool is_punct(std::string_view text) const { return is(TokenKind::Punctuation, text); }
  bool is_op(std::string_view text) const { return is(TokenKind::Operator, text); }
  bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
  bool is_ident(std::string_view text) const { return is(TokenKind::Identifier, text); }
};

struct Diagnostic {
  std::string code;  // UnterminatedString, UnterminatedComment, ParseError, ...
  std::string message;
  int line = 0;
  int col = 0;
};

struct TokenStream {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
  bool partial = false;  // some region was recovered or rejected
};

inline bool is_reserved_word(std::string_view word) {
  static constexpr std::array<std::string_view, 37> kWords = {
      "await",  "break",    "case",       "catch",  "class",  "const",  "continue", "debugger",
      "default", "delete",  "do",         "else",   "enum",   "export", "extends",  "finally",
      "for",    "function", "if",         "import", "in",     "instanceof", "let",  "new",
      "return", "static",   "super",      "switch", "this",   "throw",  "try",      "typeof",
      "var",    "void",     "while",      "with",   "yield"};
  return std::find(kWords.begin(), kWords.end(), word) != kWords.end();
}

namespace detail {

inline bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80 || c == '\\';
}
inline bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Longest match first.
constexpr std::array<std::string_view, 52> kOperators = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=", "=>", "==",
    "!=",   "<=",  ">=",  "&&",  "||",  "??",  "?.",  "++",  "--",  "+=",  "-=",   "*=", "/=",
    "%=",   "&=",  "|=",  "^=",  "**",  "<<",  ">>",  "=",   "+",   "-",   "*",    "/",  "%",
    "&",    "|",   "^",   "!",   "~",   "<",   ">",   "?",   ":",   ".",   "@",    "#",  "\\"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  TokenStream run() {
    if (src_.size() >= 3 && static_cast<unsigned char>(src_[0]) == 0xEF &&
        static_cast<unsigned char>(src_[1]) == 0xBB && static_cast<unsigned char>(src_[2]) == 0xBF) {
      advance(3);
      col_ = 0;
    }
    if (src_.substr(pos_, 2) == "#!") lex_line_comment();
    while (true) {
      skip_whitespace();
      if (pos_ >= src_.size()) break;
      lex_token();
    }
    return std::move(out_);
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 0;
  bool pending_newline_ = false;
  int template_depth_ = 0;
  TokenStream out_;

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      const char c = src_[pos_++];
      if (c == '\n' || (c == '\r' && peek() != '\n')) {
        ++line_;
        col_ = 0;
      } else {
        ++col_;
      }
    }
  }

  void skip_whitespace() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n' || c == '\r') {
        pending_newline_ = true;
        advance();
      } else if (c == ' ' || c == '\t' || c == '\v' || c == '\f') {
        advance();
      } else if (static_cast<unsigned char>(c) == 0xC2 && static_cast<unsigned char>(peek(1)) == 0xA0) {
        advance(2);  // no-break space
      } else {
        break;
      }
    }
  }

  void diag(std::string code, std::string message, int line, int col) {
    out_.diagnostics.push_back({std::move(code), std::move(message), line, col});
  }

  void emit(TokenKind kind, std::size_t begin, int line, int col) {
    Token tok;
    tok.kind = kind;
    tok.lexeme = std::string(src_.substr(begin, pos_ - begin));
    tok.offset = begin;
    tok.span = {line, line_, col, col_};
    tok.newline_before = pending_newline_;
    if (kind == TokenKind::Comment) {
      if (tok.lexeme.find_first_of("\n\r") != std::string::npos) pending_newline_ = true;
    } else {
      pending_newline_ = false;
    }
    out_.tokens.push_back(std::move(tok));
  }

  const Token* last_significant() const {
    for (auto it = out_.tokens.rbegin(); it != out_.tokens.rend(); ++it) {
      if (it->kind != TokenKind::Comment) return &*it;
    }
    return nullptr;
  }

  // Whether a '/' at this point starts a regular expression literal rather
  // than a division operator.
  bool regex_allowed() const {
    const Token* prev = last_significant();
    if (!prev) return true;
    switch (prev->kind) {
      case TokenKind::Identifier:
      case TokenKind::Literal: return false;
      case TokenKind::Keyword: return prev->lexeme != "this" && prev->lexeme != "super";
      case TokenKind::Punctuation: return prev->lexeme != ")" && prev->lexeme != "]";
      case TokenKind::Operator: return prev->lexeme != "++" && prev->lexeme != "--";
      case TokenKind::Comment: return true;
    }
    return true;
  }

  void skip_to_line_end() {
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') advance();
  }

  void lex_line_comment() {
    const auto begin = pos_;
    const int line = line_, col = col_;
    skip_to_line_end();
    emit(TokenKind::Comment, begin, line, col);
  }

  void lex_token() {
    const char c = peek();
    const auto begin = pos_;
    const int line = line_, col = col_;

    if (c == '/' && peek(1) == '/') return lex_line_comment();
    if (c == '<' && src_.substr(pos_, 4) == "<!--") return lex_line_comment();
    if (c == '/' && peek(1) == '*') {
      const auto close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) {
        diag("UnterminatedComment", "block comment is never closed", line, col);
        out_.partial = true;
        skip_to_line_end();
      } else {
        advance(close + 2 - pos_);
      }
      return emit(TokenKind::Comment, begin, line, col);
    }
    if (c == '"' || c == '\'') return lex_string(c, begin, line, col);
    if (c == '`') return lex_template(begin, line, col);
    if (detail::is_digit(static_cast<unsigned char>(c)) || (c == '.' && detail::is_digit(static_cast<unsigned char>(peek(1))))) {
      return lex_number(begin, line, col);
    }
    if (c == '#' && detail::ident_start(static_cast<unsigned char>(peek(1))) && peek(1) != '\\') {
      advance();
      while (pos_ < src_.size() && detail::ident_part(static_cast<unsigned char>(peek()))) advance();
      return emit(TokenKind::Identifier, begin, line, col);
    }
    if (detail::ident_start(static_cast<unsigned char>(c)) && c != '\\') return lex_word(begin, line, col);
    if (c == '\\' && peek(1) == 'u') return lex_word(begin, line, col);

    if (c == '/' && regex_allowed() && try_lex_regex()) return emit(TokenKind::Literal, begin, line, col);

    if (c == '<' && regex_allowed() &&
        (detail::ident_start(static_cast<unsigned char>(peek(1))) || peek(1) == '>')) {
      diag("UnsupportedSyntax", "JSX markup is not supported", line, col);
      out_.partial = true;
    }

    switch (c) {
      case '(': case ')': case '[': case ']': case '{': case '}': case ';': case ',':
        advance();
        return emit(TokenKind::Punctuation, begin, line, col);
      default: break;
    }
    for (auto op : detail::kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        if (op == "?." && detail::is_digit(static_cast<unsigned char>(peek(2)))) continue;  // a?.5:b
        advance(op.size());
        if (op == "#" || op == "\\") diag("UnexpectedCharacter", "stray character", line, col);
        return emit(TokenKind::Operator, begin, line, col);
      }
    }
    advance();
    diag("UnexpectedCharacter", "unexpected character", line, col);
    emit(TokenKind::Operator, begin, line, col);
  }

  void lex_word(std::size_t begin, int line, int col) {
    while (pos_ < src_.size()) {
      const auto ch = static_cast<unsigned char>(peek());
      if (ch == '\\') {
        advance(2);  // \uXXXX escape inside an identifier
      } else if (detail::ident_part(ch)) {
        advance();
      } else {
        break;
      }
    }
    const auto word = src_.substr(begin, pos_ - begin);
    TokenKind kind = TokenKind::Identifier;
    if (word == "true" || word == "false" || word == "null") {
      kind = TokenKind::Literal;
    } else if (is_reserved_word(word)) {
      kind = TokenKind::Keyword;
      // Property names after '.' are plain identifiers: obj.default, x.new
      if (const Token* prev = last_significant(); prev && (prev->is_op(".") || prev->is_op("?."))) {
        kind = TokenKind::Identifier;
      }
    }
    emit(kind, begin, line, col);
  }

  void lex_number(std::size_t begin, int line, int col) {
    auto digits = [&] {
      while (detail::is_digit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
    };
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' || peek(1) == 'O' ||
                          peek(1) == 'b' || peek(1) == 'B')) {
      advance(2);
      while (detail::ident_part(static_cast<unsigned char>(peek()))) advance();
      return emit(TokenKind::Literal, begin, line, col);
    }
    digits();
    if (peek() == '.') {
      advance();
      digits();
    }
    if (peek() == 'e' || peek() == 'E') {
      const char sign = peek(1);
      if (detail::is_digit(static_cast<unsigned char>(sign)) ||
          ((sign == '+' || sign == '-') && detail::is_digit(static_cast<unsigned char>(peek(2))))) {
        advance(2);
        digits();
      }
    }
    if (peek() == 'n') advance();
    emit(TokenKind::Literal, begin, line, col);
  }

  void lex_string(char quote, std::size_t begin, int line, int col) {
    advance();
    while (pos_ < src_.size()) {
      const char ch = peek();
      if (ch == '\\') {
        advance(peek(1) == '\r' && peek(2) == '\n' ? 3 : 2);
      } else if (ch == quote) {
        advance();
        return emit(TokenKind::Literal, begin, line, col);
      } else if (ch == '\n' || ch == '\r') {
        break;
      } else {
        advance();
      }
    }
    diag("UnterminatedString", "string literal is never closed", line, col);
    out_.partial = true;
    emit(TokenKind::Literal, begin, line, col);
  }

  // Skips a template literal including nested ${ ... } expressions, which
  // may themselves contain strings, comments and templates. Returns false
  // at end of input.
  bool skip_template_body() {
    advance();  // opening backtick
    while (pos_ < src_.size()) {
      const char ch = peek();
      if (ch == '\\') {
        advance(2);
      } else if (ch == '`') {
        advance();
        return true;
      } else if (ch == '$' && peek(1) == '{') {
        advance(2);
        if (!skip_template_expression()) return false;
      } else {
        advance();
      }
    }
    return false;
  }

  bool skip_template_expression() {
    int depth = 1;
    while (pos_ < src_.size()) {
      const char ch = peek();
      if (ch == '{') {
        ++depth;
        advance();
      } else if (ch == '}') {
        advance();
        if (--depth == 0) return true;
      } else if (ch == '"' || ch == '\'') {
        const char q = ch;
        advance();
        while (pos_ < src_.size() && peek() != q && peek() != '\n') advance(peek() == '\\' ? 2 : 1);
        advance();
      } else if (ch == '`') {
        if (++template_depth_ > 64) return false;
        const bool ok = skip_template_body();
        --template_depth_;
        if (!ok) return false;
      } else if (ch == '/' && peek(1) == '/') {
        skip_to_line_end();
      } else if (ch == '/' && peek(1) == '*') {
        const auto close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) return false;
        advance(close + 2 - pos_);
      } else {
        advance();
      }
    }
    return false;
  }

  void lex_template(std::size_t begin, int line, int col) {
    const auto saved_pos = pos_;
    const int saved_line = line_, saved_col = col_;
    if (skip_template_body()) return emit(TokenKind::Literal, begin, line, col);
    // Unterminated: rewind and resynchronise at the next line break.
    pos_ = saved_pos;
    line_ = saved_line;
    col_ = saved_col;
    diag("UnterminatedTemplate", "template literal is never closed", line, col);
    out_.partial = true;
    skip_to_line_end();
    emit(TokenKind::Literal, begin, line, col);
  }

  bool try_lex_regex() {
    std::size_t i = pos_ + 1;
    bool in_class = false;
    while (i < src_.size()) {
      const char ch = src_[i];
      if (ch == '\n' || ch == '\r') return false;
      if (ch == '\\') {
        i += 2;
        continue;
      }
      if (in_class) {
        if (ch == ']') in_class = false;
      } else if (ch == '[') {
        in_class = true;
      } else if (ch == '/') {
        break;
      }
      ++i;
    }
    if (i >= src_.size()) return false;
    ++i;
    while (i < src_.size() && detail::ident_part(static_cast<unsigned char>(src_[i])) && src_[i] != '\\') ++i;
    advance(i - pos_);
    return true;
  }
};

}  // namespace detail

// Lexes JavaScript source into tokens, keeping comments. Malformed strings,
// comments and templates are reported and the lexer resumes at the next line
// break; the stream is then flagged partial.
inline TokenStream tokenize(std::string_view source) { return detail::Lexer(source).run(); }

}  // namespace jsvp::js
