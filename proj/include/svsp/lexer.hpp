// Tokenizer shared by the specification language and the scenario script
// language.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "svsp/diagnostic.hpp"
#include "svsp/model.hpp"

namespace svsp {

struct Token {
  enum class Kind : std::uint8_t { Ident, Int, Real, String, Punct, End };

  Kind kind = Kind::End;
  std::string text;  // identifier, punctuation, or decoded string contents
  Value value;       // Int / Real / String literal
  Loc loc;
  Loc end;           // position just past the token
  bool line_start = false;

  [[nodiscard]] bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  [[nodiscard]] bool is_punct(std::string_view t) const { return is(Kind::Punct, t); }
  [[nodiscard]] bool is_ident(std::string_view t) const { return is(Kind::Ident, t); }
};

struct LexResult {
  std::vector<Token> tokens;  // always ends with an End token
  std::vector<Diagnostic> errors;
};

/// Splits `text` into tokens.  `#` starts a comment to end of line.
/// Malformed input produces E000 diagnostics; lexing always completes.
[[nodiscard]] LexResult lex(std::string_view text);

[[nodiscard]] bool is_ident_start(char c);
[[nodiscard]] bool is_ident_char(char c);
[[nodiscard]] bool is_identifier(std::string_view s);

}  // namespace svsp
