#pragma once

#include <string>
#include <vector>

#include "smartslice/source.hpp"

namespace smartslice {

enum class TokenKind {
    Identifier,
    Keyword,     // def private if else return while for switch try true false null
    Number,
    String,      // carries segments/slots metadata via the lexer string table
    DollarIdent, // bare $name outside a string (call by reflection)
    Punct,       // operators and delimiters
    Newline,     // statement separator (suppressed inside parens/brackets)
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // lexeme (strings: raw body without quotes)
    int line = 1;
    int column = 1;

    // String tokens only.
    char quote = '"';
    std::vector<std::string> segments;
    std::vector<std::string> slot_texts;  // raw slot text, e.g. evt.displayName
    std::vector<bool> slot_braced;

    bool is(TokenKind k) const { return kind == k; }
    bool is_punct(const std::string& p) const {
        return kind == TokenKind::Punct && text == p;
    }
    bool is_keyword(const std::string& k) const {
        return kind == TokenKind::Keyword && text == k;
    }
};

/// Lexes the SmartApp Groovy subset. Comments become nothing, newlines
/// become separator tokens except inside parentheses or brackets, and
/// interpolated strings keep enough structure to be rebuilt.
std::vector<Token> tokenize(const SourceFile& src);

}  // namespace smartslice
