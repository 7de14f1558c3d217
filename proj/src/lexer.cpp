#include "smartslice/lexer.hpp"

#include <cctype>
#include <set>

#include "smartslice/errors.hpp"

namespace smartslice {

namespace {

const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {
        "def",  "private", "if",     "else", "return", "while",
        "for",  "switch",  "try",    "true", "false",  "null",
    };
    return kw;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
  public:
    explicit Lexer(const SourceFile& src) : text_(src.content) {}

    std::vector<Token> run() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                advance();
                // Newlines inside parens/brackets continue the expression.
                if (group_depth_ == 0) emit_newline();
                continue;
            }
            if (c == '\r' || c == ' ' || c == '\t') {
                advance();
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                lex_block_comment();
                continue;
            }
            if (c == '"' || c == '\'') {
                lex_string(c);
                continue;
            }
            if (c == '$' && ident_start(peek(1))) {
                lex_dollar_ident();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number();
                continue;
            }
            if (ident_start(c)) {
                lex_word();
                continue;
            }
            lex_punct();
        }
        // The final line acts as a statement terminator even without '\n'.
        emit_newline();
        Token end;
        end.kind = TokenKind::End;
        end.line = line_;
        end.column = col_;
        tokens_.push_back(end);
        return std::move(tokens_);
    }

  private:
    char peek(size_t off = 0) const {
        return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void emit_newline() {
        if (!tokens_.empty() && tokens_.back().kind == TokenKind::Newline) return;
        Token t;
        t.kind = TokenKind::Newline;
        t.text = "\n";
        t.line = line_ > 1 ? line_ - 1 : 1;
        t.column = col_;
        tokens_.push_back(t);
    }

    void push(TokenKind kind, std::string text, int line, int column) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = line;
        t.column = column;
        tokens_.push_back(std::move(t));
    }

    void lex_block_comment() {
        int line = line_, col = col_;
        advance();  // '/'
        advance();  // '*'
        while (pos_ < text_.size()) {
            if (text_[pos_] == '*' && peek(1) == '/') {
                advance();
                advance();
                return;
            }
            advance();
        }
        throw LexError(line, col, "unterminated block comment");
    }

    void lex_dollar_ident() {
        int line = line_, col = col_;
        advance();  // '$'
        std::string name;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            name += text_[pos_];
            advance();
        }
        push(TokenKind::DollarIdent, name, line, col);
    }

    void lex_number() {
        int line = line_, col = col_;
        std::string num;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '.')) {
            // Stop at a property access like 1.each (not expected, but safe).
            if (text_[pos_] == '.' &&
                !std::isdigit(static_cast<unsigned char>(peek(1))))
                break;
            num += text_[pos_];
            advance();
        }
        push(TokenKind::Number, num, line, col);
    }

    void lex_word() {
        int line = line_, col = col_;
        std::string word;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            word += text_[pos_];
            advance();
        }
        TokenKind kind =
            keywords().count(word) ? TokenKind::Keyword : TokenKind::Identifier;
        push(kind, std::move(word), line, col);
    }

    void lex_string(char quote) {
        int line = line_, col = col_;
        advance();  // opening quote
        Token t;
        t.kind = TokenKind::String;
        t.quote = quote;
        t.line = line;
        t.column = col;
        std::string segment;
        std::string raw;
        while (true) {
            if (pos_ >= text_.size() || text_[pos_] == '\n')
                throw LexError(line, col, "unterminated string literal");
            char c = text_[pos_];
            if (c == quote) {
                advance();
                break;
            }
            if (c == '\\') {
                raw += c;
                segment += c;
                advance();
                if (pos_ >= text_.size())
                    throw LexError(line, col, "unterminated string literal");
                raw += text_[pos_];
                segment += text_[pos_];
                advance();
                continue;
            }
            if (c == '$' && quote == '"' &&
                (ident_start(peek(1)) || peek(1) == '{')) {
                advance();  // '$'
                t.segments.push_back(segment);
                segment.clear();
                std::string slot;
                bool braced = false;
                if (text_[pos_] == '{') {
                    braced = true;
                    advance();
                    while (pos_ < text_.size() && text_[pos_] != '}' &&
                           text_[pos_] != '\n') {
                        slot += text_[pos_];
                        advance();
                    }
                    if (pos_ >= text_.size() || text_[pos_] != '}')
                        throw LexError(line, col, "unterminated ${...} slot");
                    advance();  // '}'
                } else {
                    // $ident(.ident)*
                    while (pos_ < text_.size() && ident_char(text_[pos_])) {
                        slot += text_[pos_];
                        advance();
                    }
                    while (text_[pos_] == '.' && ident_start(peek(1))) {
                        slot += '.';
                        advance();
                        while (pos_ < text_.size() && ident_char(text_[pos_])) {
                            slot += text_[pos_];
                            advance();
                        }
                    }
                }
                t.slot_texts.push_back(slot);
                t.slot_braced.push_back(braced);
                raw += '$';
                raw += braced ? "{" + slot + "}" : slot;
                continue;
            }
            raw += c;
            segment += c;
            advance();
        }
        t.segments.push_back(segment);
        t.text = raw;
        tokens_.push_back(std::move(t));
    }

    void lex_punct() {
        int line = line_, col = col_;
        static const char* two_char[] = {"==", "!=", "<=", ">=", "&&", "||",
                                         "+=", "-=", "*=", "/=", "?:"};
        std::string two;
        two += text_[pos_];
        two += peek(1);
        for (const char* op : two_char) {
            if (two == op) {
                advance();
                advance();
                push(TokenKind::Punct, two, line, col);
                return;
            }
        }
        char c = text_[pos_];
        static const std::string singles = "(){}[]<>=+-*/%!.,:;?&|";
        if (singles.find(c) == std::string::npos)
            throw LexError(line, col, std::string("illegal character '") + c + "'");
        if (c == '(' || c == '[') ++group_depth_;
        if ((c == ')' || c == ']') && group_depth_ > 0) --group_depth_;
        advance();
        push(TokenKind::Punct, std::string(1, c), line, col);
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int group_depth_ = 0;
    std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(const SourceFile& src) {
    return Lexer(src).run();
}

}  // namespace smartslice
