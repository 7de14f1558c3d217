#pragma once

#include "smartslice/ast.hpp"
#include "smartslice/lexer.hpp"
#include "smartslice/source.hpp"

namespace smartslice {

/// Parses a token stream into a Program. Every node keeps the 1-based line
/// of its first token so transforms can preserve the original layout.
Program parse(const std::vector<Token>& tokens, const SourceFile& src);

/// Convenience: tokenize + parse.
Program parse_source(const SourceFile& src);
Program parse_text(const std::string& text, const std::string& name = "<memory>");

}  // namespace smartslice
