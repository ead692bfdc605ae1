#include "epddl/lexer.hpp"

#include <cctype>

namespace epddl {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& filename) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  std::size_t i = 0;

  auto here = [&]() { return SourcePos{filename, line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](TokenKind kind, std::string tok_text, SourcePos pos) {
    tokens.push_back({kind, std::move(tok_text), std::move(pos)});
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourcePos pos = here();
    switch (c) {
      case '(': push(TokenKind::LParen, "(", pos); advance(1); continue;
      case ')': push(TokenKind::RParen, ")", pos); advance(1); continue;
      case '[': push(TokenKind::LBracket, "[", pos); advance(1); continue;
      case ']': push(TokenKind::RBracket, "]", pos); advance(1); continue;
      case '<': push(TokenKind::LAngle, "<", pos); advance(1); continue;
      case '>': push(TokenKind::RAngle, ">", pos); advance(1); continue;
      case '|': push(TokenKind::Pipe, "|", pos); advance(1); continue;
      case '-': push(TokenKind::Dash, "-", pos); advance(1); continue;
      case '=': push(TokenKind::EqOp, "=", pos); advance(1); continue;
      case '/':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          push(TokenKind::EqOp, "/=", pos);
          advance(2);
          continue;
        }
        throw LexError(pos, "illegal character '/'");
      default:
        break;
    }
    if (c == ':' || c == '?') {
      std::size_t start = i;
      advance(1);
      if (i >= text.size() || !name_start(text[i]))
        throw LexError(pos, c == '?' ? "malformed variable: '?' must be followed by a name"
                                     : "malformed keyword: ':' must be followed by a name");
      while (i < text.size() && name_char(text[i])) advance(1);
      push(c == ':' ? TokenKind::Keyword : TokenKind::Variable,
           std::string(text.substr(start, i - start)), pos);
      continue;
    }
    if (name_start(c)) {
      std::size_t start = i;
      advance(1);
      while (i < text.size() && name_char(text[i])) advance(1);
      std::string word(text.substr(start, i - start));
      if ((word == "Kw" || word == "C") && i < text.size() && text[i] == '.') {
        advance(1);
        push(TokenKind::ModalityName, word + ".", pos);
      } else {
        push(TokenKind::Name, std::move(word), pos);
      }
      continue;
    }
    throw LexError(pos, std::string("illegal character '") + c + "'");
  }
  push(TokenKind::End, "", here());
  return tokens;
}

}  // namespace epddl
