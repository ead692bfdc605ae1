#pragma once

#include <string_view>

#include "epddl/ast.hpp"
#include "epddl/lexer.hpp"

namespace epddl {

/// True for EBNF terminals and the reserved words All/basic/true/false/default;
/// these are rejected wherever a fresh name is introduced.
bool is_reserved_name(const std::string& name);

/// Parse one source file (problem, domain or action type library). Stops at
/// the first syntax error.
ast::Fragment parse(const std::vector<Token>& tokens);

ast::Fragment parse_text(std::string_view text, const std::string& filename);

/// Render a fragment back to parseable EPDDL text.
std::string to_text(const ast::Fragment& fragment);

}  // namespace epddl
