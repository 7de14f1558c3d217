#include "smartslice/parser.hpp"

#include <algorithm>
#include <set>

#include "smartslice/errors.hpp"

namespace smartslice {

namespace {

class Parser {
  public:
    Parser(const std::vector<Token>& tokens, const SourceFile& src)
        : tokens_(tokens), src_(src) {}

    Program run() {
        program_.line_count = src_.line_count;
        program_.source_name = src_.path;
        skip_newlines();
        while (!at_end()) {
            parse_top_level();
            skip_newlines();
        }
        resolve_subscribes();
        check_input_uniqueness();
        return std::move(program_);
    }

  private:
    // ----- token helpers -------------------------------------------------

    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek(size_t off = 1) const {
        size_t i = pos_ + off;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at_end() const { return cur().kind == TokenKind::End; }

    const Token& take() { return tokens_[pos_++]; }

    void skip_newlines() {
        while (cur().kind == TokenKind::Newline) ++pos_;
    }

    bool accept_punct(const std::string& p) {
        if (cur().is_punct(p)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p, const std::string& context) {
        if (!accept_punct(p))
            throw ParseError(cur().line, "expected '" + p + "' " + context +
                                             ", found '" + describe(cur()) + "'");
    }

    /// Opening braces may sit on the following line.
    void expect_block_open(const std::string& context) {
        skip_newlines();
        expect_punct("{", context);
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case TokenKind::End: return "<end of file>";
            case TokenKind::Newline: return "<newline>";
            case TokenKind::String: return "\"" + t.text + "\"";
            default: return t.text;
        }
    }

    std::string expect_identifier(const std::string& context) {
        if (cur().kind != TokenKind::Identifier)
            throw ParseError(cur().line, "expected identifier " + context +
                                             ", found '" + describe(cur()) + "'");
        return take().text;
    }

    // ----- top level ------------------------------------------------------

    void parse_top_level() {
        if (cur().kind == TokenKind::Identifier && cur().text == "definition" &&
            peek().is_punct("(")) {
            parse_definition();
            return;
        }
        if (cur().kind == TokenKind::Identifier && cur().text == "preferences" &&
            (peek().is_punct("{") || peek().kind == TokenKind::Newline)) {
            parse_preferences();
            return;
        }
        if (cur().is_keyword("def") || cur().is_keyword("private")) {
            // A method declaration, or a `def x = ...` top-level assignment.
            if (is_method_decl()) {
                parse_method();
                return;
            }
        }
        program_.top_statements.push_back(parse_statement());
    }

    bool is_method_decl() const {
        // def name ( ... ) {   |   private name ( ... ) {
        size_t i = pos_;
        if (tokens_[i].is_keyword("private") && tokens_[i + 1].is_keyword("def")) ++i;
        if (!(tokens_[i].is_keyword("def") || tokens_[i].is_keyword("private")))
            return false;
        ++i;
        if (tokens_[i].kind != TokenKind::Identifier) return false;
        ++i;
        if (!tokens_[i].is_punct("(")) return false;
        // Scan to the matching close paren, then require a block open.
        int depth = 0;
        for (; i < tokens_.size(); ++i) {
            if (tokens_[i].is_punct("(")) ++depth;
            if (tokens_[i].is_punct(")")) {
                --depth;
                if (depth == 0) break;
            }
        }
        ++i;
        while (i < tokens_.size() && tokens_[i].kind == TokenKind::Newline) ++i;
        return i < tokens_.size() && tokens_[i].is_punct("{");
    }

    void parse_definition() {
        DefinitionBlock block;
        block.line = cur().line;
        take();  // definition
        expect_punct("(", "after definition");
        int depth = 1;
        int last_line = block.line;
        while (depth > 0) {
            if (at_end())
                throw ParseError(block.line, "unterminated definition block");
            const Token& t = take();
            if (t.is_punct("(")) ++depth;
            if (t.is_punct(")")) --depth;
            last_line = std::max(last_line, t.line);
        }
        block.end_line = last_line;
        auto lines = src_.lines();
        for (int l = block.line; l <= block.end_line && l <= (int)lines.size(); ++l)
            block.raw_lines.push_back(lines[l - 1]);
        program_.definition = std::move(block);
    }

    void parse_preferences() {
        Preferences prefs;
        prefs.line = cur().line;
        take();  // preferences
        expect_block_open("after preferences");
        skip_newlines();
        while (!cur().is_punct("}")) {
            if (at_end())
                throw ParseError(prefs.line, "unterminated preferences block");
            if (cur().kind == TokenKind::Identifier && cur().text == "section") {
                prefs.sections.push_back(parse_section());
            } else if (cur().kind == TokenKind::Identifier && cur().text == "input") {
                // Sections are optional; inputs may sit directly in preferences.
                if (prefs.sections.empty() || prefs.sections.back().end_line != 0) {
                    Section s;
                    s.line = cur().line;
                    prefs.sections.push_back(std::move(s));
                }
                prefs.sections.back().inputs.push_back(parse_input());
            } else {
                throw ParseError(cur().line, "expected section or input in "
                                             "preferences, found '" +
                                                 describe(cur()) + "'");
            }
            skip_newlines();
        }
        prefs.end_line = cur().line;
        take();  // }
        program_.preferences = std::move(prefs);
    }

    Section parse_section() {
        Section section;
        section.line = cur().line;
        take();  // section
        bool parens = accept_punct("(");
        if (cur().kind == TokenKind::String) section.title = take().text;
        if (parens) expect_punct(")", "after section title");
        expect_block_open("after section");
        skip_newlines();
        while (!cur().is_punct("}")) {
            if (at_end())
                throw ParseError(section.line, "unterminated section block");
            if (cur().kind == TokenKind::Identifier && cur().text == "input") {
                section.inputs.push_back(parse_input());
            } else {
                throw ParseError(cur().line, "expected input declaration, found '" +
                                                 describe(cur()) + "'");
            }
            skip_newlines();
        }
        section.end_line = cur().line;
        take();  // }
        return section;
    }

    InputDecl parse_input() {
        InputDecl decl;
        decl.line = cur().line;
        take();  // input
        bool parens = accept_punct("(");
        if (cur().kind != TokenKind::String)
            throw ParseError(cur().line, "input declaration needs a quoted name");
        decl.name = trim(take().text);
        expect_punct(",", "after input name");
        if (cur().kind != TokenKind::String)
            throw ParseError(cur().line, "input declaration needs a capability string");
        decl.capability = trim(take().text);
        while (accept_punct(",")) {
            skip_newlines();
            decl.options.push_back(parse_arg());
        }
        if (parens) expect_punct(")", "after input options");
        return decl;
    }

    void parse_method() {
        MethodDecl method;
        method.id = program_.fresh_id();
        method.line = cur().line;
        if (cur().is_keyword("private")) {
            method.visibility = Visibility::Private;
            take();
            if (cur().is_keyword("def")) take();
        } else {
            take();  // def
        }
        method.name = expect_identifier("as method name");
        expect_punct("(", "after method name");
        skip_newlines();
        std::set<std::string> seen;
        while (!cur().is_punct(")")) {
            std::string param = expect_identifier("as parameter name");
            if (!seen.insert(param).second)
                throw ParseError(method.line,
                                 "duplicate parameter '" + param + "' in method " +
                                     method.name);
            method.params.push_back(std::move(param));
            if (!accept_punct(",")) break;
            skip_newlines();
        }
        expect_punct(")", "after parameter list");
        expect_block_open("before method body");
        method.body = parse_block_body(method.end_line);
        program_.methods.push_back(std::move(method));
    }

    /// Parses statements until the matching '}' and returns them;
    /// stores the closing brace line in end_line.
    std::vector<Stmt> parse_block_body(int& end_line) {
        std::vector<Stmt> body;
        skip_newlines();
        while (!cur().is_punct("}")) {
            if (at_end()) throw ParseError(cur().line, "unterminated block");
            body.push_back(parse_statement());
            skip_newlines();
        }
        end_line = cur().line;
        take();  // }
        return body;
    }

    // ----- statements -----------------------------------------------------

    Stmt parse_statement() {
        Stmt stmt;
        stmt.id = program_.fresh_id();
        stmt.line = cur().line;
        if (cur().is_keyword("if")) {
            stmt.node = parse_if();
            return stmt;
        }
        if (cur().is_keyword("return")) {
            take();
            ReturnStmt ret;
            if (!stmt_boundary()) ret.value.push_back(parse_expression());
            end_statement();
            stmt.node = std::move(ret);
            return stmt;
        }
        if (cur().is_keyword("while") || cur().is_keyword("for") ||
            cur().is_keyword("switch") || cur().is_keyword("try")) {
            stmt.node = parse_generic_block();
            return stmt;
        }
        if (cur().is_keyword("def") || cur().is_keyword("private")) {
            take();
            if (cur().is_keyword("def")) take();
            // `def List numbers = [...]` carries an optional type word.
            if (cur().kind == TokenKind::Identifier &&
                peek().kind == TokenKind::Identifier)
                take();
            Assignment assign;
            assign.declares = true;
            assign.target = parse_assign_target();
            expect_punct("=", "in declaration");
            assign.value = parse_expression();
            end_statement();
            stmt.node = std::move(assign);
            return stmt;
        }
        // Assignment without def: ident[.member]* = expr
        if (cur().kind == TokenKind::Identifier && is_assignment_ahead()) {
            Assignment assign;
            assign.target = parse_assign_target();
            expect_punct("=", "in assignment");
            assign.value = parse_expression();
            end_statement();
            stmt.node = std::move(assign);
            return stmt;
        }
        // subscribe(device, "event", handler)
        if (cur().kind == TokenKind::Identifier && cur().text == "subscribe") {
            if (auto sub = try_parse_subscribe()) {
                end_statement();
                stmt.node = std::move(*sub);
                return stmt;
            }
        }
        ExprStmt expr_stmt{parse_expression()};
        end_statement();
        stmt.node = std::move(expr_stmt);
        return stmt;
    }

    bool stmt_boundary() const {
        return cur().kind == TokenKind::Newline || cur().is_punct(";") ||
               cur().is_punct("}") || at_end();
    }

    void end_statement() {
        while (cur().is_punct(";")) take();
        if (cur().kind == TokenKind::Newline || cur().is_punct("}") || at_end())
            return;
        throw ParseError(cur().line,
                         "expected end of statement, found '" + describe(cur()) + "'");
    }

    bool is_assignment_ahead() const {
        size_t i = pos_;
        if (tokens_[i].kind != TokenKind::Identifier) return false;
        ++i;
        while (tokens_[i].is_punct(".") &&
               tokens_[i + 1].kind == TokenKind::Identifier)
            i += 2;
        return tokens_[i].is_punct("=");
    }

    AssignTarget parse_assign_target() {
        AssignTarget target;
        target.base = expect_identifier("as assignment target");
        while (cur().is_punct(".") && peek().kind == TokenKind::Identifier) {
            take();
            target.members.push_back(take().text);
        }
        return target;
    }

    std::optional<SubscribeStmt> try_parse_subscribe() {
        // Only the canonical three-argument form becomes a Subscribe node.
        size_t save = pos_;
        take();  // subscribe
        if (!accept_punct("(")) {
            pos_ = save;
            return std::nullopt;
        }
        skip_newlines();
        if (cur().kind != TokenKind::Identifier) {
            pos_ = save;
            return std::nullopt;
        }
        SubscribeStmt sub;
        sub.device = take().text;
        if (!accept_punct(",") || cur().kind != TokenKind::String) {
            pos_ = save;
            return std::nullopt;
        }
        Token event = take();
        sub.event.quote = event.quote;
        sub.event.segments = event.segments;
        if (!accept_punct(",") || cur().kind != TokenKind::Identifier) {
            pos_ = save;
            return std::nullopt;
        }
        sub.handler = take().text;
        if (!accept_punct(")")) {
            pos_ = save;
            return std::nullopt;
        }
        return sub;
    }

    IfStmt parse_if() {
        IfStmt node;
        take();  // if
        expect_punct("(", "after if");
        node.condition = parse_expression();
        expect_punct(")", "after if condition");
        expect_block_open("before if body");
        node.then_body = parse_block_body(node.then_end_line);
        node.end_line = node.then_end_line;
        // `} else ...` may follow, possibly on its own line.
        size_t save = pos_;
        skip_newlines();
        if (cur().is_keyword("else")) {
            node.has_else = true;
            node.else_line = cur().line;
            take();
            if (cur().is_keyword("if")) {
                // else-if chains nest: the else body is a single if-statement.
                Stmt nested;
                nested.id = program_.fresh_id();
                nested.line = cur().line;
                nested.node = parse_if();
                node.end_line = stmt_end_line(nested);
                node.else_body.push_back(std::move(nested));
            } else {
                expect_block_open("after else");
                node.else_body = parse_block_body(node.end_line);
            }
        } else {
            pos_ = save;
        }
        return node;
    }

    static int stmt_end_line(const Stmt& s) {
        if (auto* iff = std::get_if<IfStmt>(&s.node)) return iff->end_line;
        if (auto* blk = std::get_if<BlockStmt>(&s.node)) return blk->end_line;
        return s.line;
    }

    BlockStmt parse_generic_block() {
        BlockStmt block;
        int line = cur().line;
        std::string header = take().text;  // while / for / switch / try
        if (accept_punct("(")) {
            header += " (";
            int depth = 1;
            while (depth > 0) {
                if (at_end()) throw ParseError(line, "unterminated " + header);
                const Token& t = take();
                if (t.is_punct("(")) ++depth;
                if (t.is_punct(")")) {
                    --depth;
                    if (depth == 0) break;
                }
                if (!header.ends_with("(")) header += " ";
                header += t.kind == TokenKind::String ? "\"" + t.text + "\"" : t.text;
            }
            header += ")";
        }
        block.header = header;
        expect_block_open("before block body");
        block.body = parse_block_body(block.end_line);
        return block;
    }

    // ----- expressions ----------------------------------------------------

    Arg parse_arg() {
        Arg arg;
        if (cur().kind == TokenKind::Identifier && peek().is_punct(":")) {
            arg.name = take().text;
            take();  // :
            skip_newlines();
        }
        arg.value = parse_expression();
        return arg;
    }

    Expr parse_expression() { return parse_binary(0); }

    struct OpLevel {
        std::vector<std::string> ops;
    };

    const std::vector<OpLevel>& precedence() const {
        static const std::vector<OpLevel> levels = {
            {{"||"}}, {{"&&"}}, {{"==", "!="}}, {{"<", ">", "<=", ">="}},
            {{"+", "-"}}, {{"*", "/", "%"}},
        };
        return levels;
    }

    Expr parse_binary(size_t level) {
        if (level >= precedence().size()) return parse_unary();
        Expr lhs = parse_binary(level + 1);
        while (true) {
            const auto& ops = precedence()[level].ops;
            auto it = std::find_if(ops.begin(), ops.end(), [&](const std::string& op) {
                return cur().is_punct(op);
            });
            if (it == ops.end()) return lhs;
            std::string op = take().text;
            skip_newlines();  // operator at line end continues the statement
            Expr rhs = parse_binary(level + 1);
            Binary bin;
            bin.op = std::move(op);
            bin.operands.push_back(std::move(lhs));
            bin.operands.push_back(std::move(rhs));
            Expr combined;
            combined.line = bin.operands[0].line;
            combined.node = std::move(bin);
            lhs = std::move(combined);
        }
    }

    Expr parse_unary() {
        if (cur().is_punct("!") || cur().is_punct("-")) {
            Expr expr;
            expr.line = cur().line;
            Unary un;
            un.op = take().text;
            un.operands.push_back(parse_unary());
            expr.node = std::move(un);
            return expr;
        }
        return parse_postfix();
    }

    Expr parse_postfix() {
        Expr expr = parse_primary();
        while (true) {
            if (cur().is_punct(".") && peek().kind == TokenKind::Identifier) {
                take();
                std::string member = take().text;
                if (cur().is_punct("(") || cur().is_punct("{")) {
                    Call call;
                    call.receiver.push_back(std::move(expr));
                    call.name = std::move(member);
                    parse_call_suffix(call);
                    Expr next;
                    next.line = call.receiver[0].line;
                    next.node = std::move(call);
                    expr = std::move(next);
                } else {
                    Property prop;
                    prop.base.push_back(std::move(expr));
                    prop.member = std::move(member);
                    Expr next;
                    next.line = prop.base[0].line;
                    next.node = std::move(prop);
                    expr = std::move(next);
                }
                continue;
            }
            break;
        }
        return expr;
    }

    void parse_call_suffix(Call& call) {
        if (accept_punct("(")) {
            skip_newlines();
            while (!cur().is_punct(")")) {
                if (at_end())
                    throw ParseError(cur().line, "unterminated argument list");
                call.args.push_back(parse_arg());
                skip_newlines();
                if (!accept_punct(",")) break;
                skip_newlines();
            }
            expect_punct(")", "after arguments");
        }
        if (cur().is_punct("{")) {
            take();
            Closure closure;
            skip_newlines();
            while (!cur().is_punct("}")) {
                if (at_end()) throw ParseError(cur().line, "unterminated closure");
                closure.body.push_back(parse_statement());
                skip_newlines();
            }
            take();  // }
            call.trailing.push_back(std::move(closure));
        }
    }

    Expr parse_primary() {
        Expr expr;
        expr.line = cur().line;
        if (cur().kind == TokenKind::Number) {
            expr.node = NumberLit{take().text};
            return expr;
        }
        if (cur().is_keyword("true") || cur().is_keyword("false") ||
            cur().is_keyword("null")) {
            expr.node = KeywordLit{take().text};
            return expr;
        }
        if (cur().kind == TokenKind::String) {
            Token t = take();
            StringLit lit = to_string_lit(t);
            // "$name"(...) calls the method the string names.
            if (cur().is_punct("(") && !lit.slots.empty()) {
                ReflectiveCall refl;
                refl.name_slots = lit.slots;
                take();  // (
                skip_newlines();
                while (!cur().is_punct(")")) {
                    if (at_end())
                        throw ParseError(cur().line, "unterminated argument list");
                    refl.args.push_back(parse_arg());
                    skip_newlines();
                    if (!accept_punct(",")) break;
                    skip_newlines();
                }
                expect_punct(")", "after arguments");
                expr.node = std::move(refl);
                return expr;
            }
            expr.node = std::move(lit);
            return expr;
        }
        if (cur().kind == TokenKind::DollarIdent) {
            ReflectiveCall refl;
            refl.bare = true;
            InterpSlot slot;
            slot.ident = take().text;
            refl.name_slots.push_back(std::move(slot));
            expr.node = std::move(refl);
            return expr;
        }
        if (accept_punct("[")) {
            ListLit list;
            skip_newlines();
            while (!cur().is_punct("]")) {
                if (at_end()) throw ParseError(expr.line, "unterminated list literal");
                list.elems.push_back(parse_expression());
                skip_newlines();
                if (!accept_punct(",")) break;
                skip_newlines();
            }
            expect_punct("]", "after list literal");
            expr.node = std::move(list);
            return expr;
        }
        if (accept_punct("(")) {
            Expr inner = parse_expression();
            expect_punct(")", "after parenthesized expression");
            return inner;
        }
        if (cur().kind == TokenKind::Identifier) {
            std::string name = take().text;
            if (cur().is_punct("(") || cur().is_punct("{")) {
                Call call;
                call.name = std::move(name);
                parse_call_suffix(call);
                expr.node = std::move(call);
                return expr;
            }
            // Command-style call: `sendPush "message"` / `sendSms phone, msg`
            if (command_argument_ahead()) {
                Call call;
                call.name = std::move(name);
                call.args.push_back(parse_arg());
                while (accept_punct(",")) {
                    skip_newlines();
                    call.args.push_back(parse_arg());
                }
                expr.node = std::move(call);
                return expr;
            }
            expr.node = Identifier{std::move(name)};
            return expr;
        }
        throw ParseError(cur().line,
                         "expected expression, found '" + describe(cur()) + "'");
    }

    bool command_argument_ahead() const {
        const Token& t = cur();
        if (t.kind == TokenKind::String || t.kind == TokenKind::Number ||
            t.kind == TokenKind::DollarIdent)
            return true;
        if (t.kind == TokenKind::Identifier)
            // `foo bar` is a call; `foo` alone or `foo = ...` is not.
            return !peek().is_punct("=");
        if (t.is_keyword("true") || t.is_keyword("false") || t.is_keyword("null"))
            return true;
        return false;
    }

    static StringLit to_string_lit(const Token& t) {
        StringLit lit;
        lit.quote = t.quote;
        lit.segments = t.segments;
        for (size_t i = 0; i < t.slot_texts.size(); ++i) {
            InterpSlot slot;
            slot.braced = t.slot_braced[i];
            const std::string& text = t.slot_texts[i];
            size_t dot = text.find('.');
            slot.ident = text.substr(0, dot);
            size_t start = dot;
            while (start != std::string::npos) {
                size_t next = text.find('.', start + 1);
                slot.members.push_back(text.substr(
                    start + 1, next == std::string::npos ? next : next - start - 1));
                start = next;
            }
            // Braced slots may hold expressions; keep the leading identifier
            // as the taint-relevant reference and the rest as members.
            lit.slots.push_back(std::move(slot));
        }
        if (lit.segments.empty()) lit.segments.push_back("");
        return lit;
    }

    // ----- post-parse checks ----------------------------------------------

    void resolve_subscribes() {
        for_each_stmt(program_, [&](Stmt& s) {
            if (auto* sub = std::get_if<SubscribeStmt>(&s.node))
                sub->resolved = program_.find_method(sub->handler) != nullptr;
        });
    }

    void check_input_uniqueness() {
        if (!program_.preferences) return;
        std::set<std::string> seen;
        for (const auto& section : program_.preferences->sections)
            for (const auto& input : section.inputs)
                if (!seen.insert(input.name).second)
                    throw ParseError(input.line,
                                     "duplicate input declaration '" + input.name + "'");
    }

    static std::string trim(const std::string& s) {
        size_t a = s.find_first_not_of(" \t");
        size_t b = s.find_last_not_of(" \t");
        if (a == std::string::npos) return "";
        return s.substr(a, b - a + 1);
    }

    const std::vector<Token>& tokens_;
    const SourceFile& src_;
    size_t pos_ = 0;
    Program program_;
};

}  // namespace

Program parse(const std::vector<Token>& tokens, const SourceFile& src) {
    return Parser(tokens, src).run();
}

Program parse_source(const SourceFile& src) { return parse(tokenize(src), src); }

Program parse_text(const std::string& text, const std::string& name) {
    return parse_source(SourceFile::from_string(text, name));
}

}  // namespace smartslice
