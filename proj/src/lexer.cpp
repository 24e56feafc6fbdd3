#include "svsp/lexer.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace svsp {

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || (c >= '0' && c <= '9');
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!is_ident_char(s[i])) return false;
  return true;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : src_(text) {}

  LexResult run() {
    bool at_line_start = true;
    while (true) {
      skip_blank(at_line_start);
      if (pos_ >= src_.size()) break;
      const Loc start = here();
      const std::size_t before = result_.tokens.size();
      scan(start);
      if (result_.tokens.size() > before) {
        result_.tokens.back().line_start = at_line_start;
        result_.tokens.back().end = here();
        at_line_start = false;
      }
    }
    Token end;
    end.kind = Token::Kind::End;
    end.loc = result_.tokens.empty() ? Loc{1, 1} : result_.tokens.back().end;
    end.end = end.loc;
    end.line_start = true;
    result_.tokens.push_back(end);
    return std::move(result_);
  }

 private:
  [[nodiscard]] Loc here() const { return Loc{line_, col_}; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank(bool& at_line_start) {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        at_line_start = true;
        advance();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void error(Loc loc, std::string msg) {
    result_.errors.push_back(Diagnostic::make("E000", "", msg, loc));
  }

  void push(Token t) { result_.tokens.push_back(std::move(t)); }

  void scan(Loc start) {
    const char c = peek();
    if (is_ident_start(c)) {
      Token t;
      t.kind = Token::Kind::Ident;
      t.loc = start;
      while (pos_ < src_.size() && (is_ident_char(peek()) || (t.text.empty() && c == '$'))) {
        t.text += peek();
        advance();
      }
      push(std::move(t));
      return;
    }
    if (is_digit(c)) {
      scan_number(start);
      return;
    }
    if (c == '"') {
      scan_string(start);
      return;
    }
    static constexpr std::array<std::string_view, 6> two_char{":=", "==", "!=", "<=", ">=", "++"};
    for (auto op : two_char) {
      if (peek() == op[0] && peek(1) == op[1]) {
        Token t;
        t.kind = Token::Kind::Punct;
        t.text = std::string(op);
        t.loc = start;
        advance();
        advance();
        push(std::move(t));
        return;
      }
    }
    static constexpr std::string_view singles = "{}[](),:=<>+-*/";
    if (singles.find(c) != std::string_view::npos) {
      Token t;
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      t.loc = start;
      advance();
      push(std::move(t));
      return;
    }
    const auto byte = static_cast<unsigned char>(c);
    std::string shown = (byte >= 0x20 && byte < 0x7F) ? std::string(1, c)
                                                      : "\\x" + to_hex(byte);
    error(start, "unexpected character '" + shown + "'");
    advance();
  }

  static std::string to_hex(unsigned char b) {
    static constexpr char digits[] = "0123456789abcdef";
    return {digits[b >> 4U], digits[b & 0xFU]};
  }

  void scan_number(Loc start) {
    const std::size_t begin = pos_;
    while (is_digit(peek())) advance();
    bool real = false;
    if (peek() == '.' && is_digit(peek(1))) {
      real = true;
      advance();
      while (is_digit(peek())) advance();
      if (peek() == 'e' || peek() == 'E') {
        const std::size_t save_pos = pos_;
        const int save_col = col_;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        if (is_digit(peek())) {
          while (is_digit(peek())) advance();
        } else {
          pos_ = save_pos;
          col_ = save_col;
        }
      }
    }
    const std::string_view text = src_.substr(begin, pos_ - begin);
    Token t;
    t.loc = start;
    t.text = std::string(text);
    if (real) {
      double d = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
      if (ec != std::errc() || !std::isfinite(d)) {
        error(start, "real literal out of range");
        return;
      }
      t.kind = Token::Kind::Real;
      t.value = d;
    } else {
      std::int64_t i = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
      if (ec != std::errc()) {
        error(start, "integer literal out of range");
        return;
      }
      t.kind = Token::Kind::Int;
      t.value = i;
    }
    if (is_ident_start(peek())) {
      error(here(), "identifier immediately follows a number");
    }
    push(std::move(t));
  }

  void scan_string(Loc start) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n') {
        error(start, "unterminated string literal");
        return;
      }
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        const char next = peek(1);
        if (next == '"' || next == '\\') {
          out += next;
          advance();
          advance();
          continue;
        }
        error(here(), "unknown escape sequence");
        advance();
        continue;
      }
      out += c;
      advance();
    }
    Token t;
    t.kind = Token::Kind::String;
    t.loc = start;
    t.text = out;
    t.value = std::move(out);
    push(std::move(t));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  LexResult result_;
};

}  // namespace

LexResult lex(std::string_view text) { return Lexer(text).run(); }

}  // namespace svsp
