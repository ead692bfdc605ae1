#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "epddl/errors.hpp"

namespace epddl {

enum class TokenKind {
  LParen,
  RParen,
  Name,
  Variable,
  Keyword,       // ":requirements", ":and", ...
  LBracket,      // [
  RBracket,      // ]
  LAngle,        // <
  RAngle,        // >
  Pipe,          // |
  Dash,          // -
  EqOp,          // "=" or "/="
  ModalityName,  // "Kw." or "C."
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
};

/// Tokenize EPDDL text. Comments run from ';' to end of line. Names are
/// case-sensitive; "?x" is one token while "? x" is an error.
std::vector<Token> lex(std::string_view text, const std::string& filename);

}  // namespace epddl
