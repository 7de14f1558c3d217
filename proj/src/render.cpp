#include "smartslice/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace smartslice {

namespace {

std::string render_arg(const Arg& a) {
    std::string out;
    if (a.name) out = *a.name + ": ";
    return out + render_expr(a.value);
}

std::string render_args(const std::vector<Arg>& args) {
    std::string out;
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += render_arg(args[i]);
    }
    return out;
}

std::string render_closure_inline(const Closure& c) {
    std::string out = "{ ";
    for (size_t i = 0; i < c.body.size(); ++i) {
        if (i) out += "; ";
        out += render_stmt_inline(c.body[i]);
    }
    return out + " }";
}

std::string render_string(const StringLit& s) {
    return std::string(1, s.quote) + s.text() + std::string(1, s.quote);
}

/// Assembles one output line from fragments placed on it in order.
class LineSheet {
  public:
    void place(int line, int depth, std::string text) {
        if (line <= 0) line = 1;
        auto& slot = lines_[line];
        if (slot.fragments.empty()) slot.depth = depth;
        slot.fragments.push_back(std::move(text));
        max_line_ = std::max(max_line_, line);
    }

    std::string compose(int min_lines) const {
        std::ostringstream out;
        int total = std::max(min_lines, max_line_);
        for (int l = 1; l <= total; ++l) {
            auto it = lines_.find(l);
            if (it != lines_.end()) {
                out << std::string(static_cast<size_t>(it->second.depth) * 4, ' ');
                for (size_t i = 0; i < it->second.fragments.size(); ++i) {
                    if (i) out << " ";
                    out << it->second.fragments[i];
                }
            }
            out << "\n";
        }
        return out.str();
    }

  private:
    struct Line {
        int depth = 0;
        std::vector<std::string> fragments;
    };
    std::map<int, Line> lines_;
    int max_line_ = 0;
};

void place_stmt(LineSheet& sheet, const Stmt& stmt, int depth);

void place_body(LineSheet& sheet, const std::vector<Stmt>& body, int depth) {
    for (const auto& s : body) place_stmt(sheet, s, depth);
}

void place_if(LineSheet& sheet, const IfStmt& node, int line, int depth,
              const std::string& prefix) {
    sheet.place(line, depth, prefix + "if (" + render_expr(node.condition) + ") {");
    place_body(sheet, node.then_body, depth + 1);
    sheet.place(node.then_end_line, depth, "}");
    if (!node.has_else) return;
    if (node.else_body.size() == 1 &&
        std::holds_alternative<IfStmt>(node.else_body[0].node) &&
        node.else_body[0].line == node.else_line) {
        place_if(sheet, std::get<IfStmt>(node.else_body[0].node), node.else_line,
                 depth, "else ");
    } else {
        sheet.place(node.else_line, depth, "else {");
        place_body(sheet, node.else_body, depth + 1);
        sheet.place(node.end_line, depth, "}");
    }
}

void place_stmt(LineSheet& sheet, const Stmt& stmt, int depth) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IfStmt>) {
                place_if(sheet, node, stmt.line, depth, "");
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                sheet.place(stmt.line, depth, node.header + " {");
                place_body(sheet, node.body, depth + 1);
                sheet.place(node.end_line, depth, "}");
            } else {
                sheet.place(stmt.line, depth, render_stmt_inline(stmt));
            }
        },
        stmt.node);
}

}  // namespace

std::string render_expr(const Expr& e) {
    return std::visit(
        [&](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Identifier>) {
                return node.name;
            } else if constexpr (std::is_same_v<T, StringLit>) {
                return render_string(node);
            } else if constexpr (std::is_same_v<T, NumberLit>) {
                return node.text;
            } else if constexpr (std::is_same_v<T, KeywordLit>) {
                return node.text;
            } else if constexpr (std::is_same_v<T, ListLit>) {
                std::string out = "[";
                for (size_t i = 0; i < node.elems.size(); ++i) {
                    if (i) out += ", ";
                    out += render_expr(node.elems[i]);
                }
                return out + "]";
            } else if constexpr (std::is_same_v<T, Call>) {
                std::string out;
                if (!node.receiver.empty())
                    out = render_expr(node.receiver[0]) + ".";
                out += node.name + "(" + render_args(node.args) + ")";
                for (const auto& c : node.trailing)
                    out += " " + render_closure_inline(c);
                return out;
            } else if constexpr (std::is_same_v<T, Property>) {
                return render_expr(node.base[0]) + "." + node.member;
            } else if constexpr (std::is_same_v<T, Binary>) {
                return render_expr(node.operands[0]) + " " + node.op + " " +
                       render_expr(node.operands[1]);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return node.op + render_expr(node.operands[0]);
            } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                std::string name;
                for (const auto& slot : node.name_slots) {
                    name += "$" + slot.ident;
                    for (const auto& m : slot.members) name += "." + m;
                }
                if (node.bare) return name;
                return "\"" + name + "\"(" + render_args(node.args) + ")";
            } else {
                return "";
            }
        },
        e.node);
}

std::string render_stmt_inline(const Stmt& s) {
    return std::visit(
        [&](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Assignment>) {
                std::string out = node.declares ? "def " : "";
                return out + node.target.display() + " = " + render_expr(node.value);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                return render_expr(node.expr);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                return node.value.empty() ? "return"
                                          : "return " + render_expr(node.value[0]);
            } else if constexpr (std::is_same_v<T, SubscribeStmt>) {
                return "subscribe(" + node.device + ", " + render_string(node.event) +
                       ", " + node.handler + ")";
            } else {
                return "";  // if / block statements span lines; handled above
            }
        },
        s.node);
}

std::string method_signature(const MethodDecl& m) {
    std::string out =
        m.visibility == Visibility::Private ? "private " : "def ";
    out += m.name + "(";
    for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ", ";
        out += m.params[i];
    }
    return out + ")";
}

std::string render(const Program& p) {
    LineSheet sheet;
    if (p.definition) {
        int line = p.definition->line;
        for (const auto& raw : p.definition->raw_lines)
            sheet.place(line++, 0, raw);
    }
    if (p.preferences) {
        const auto& prefs = *p.preferences;
        sheet.place(prefs.line, 0, "preferences {");
        for (const auto& section : prefs.sections) {
            if (section.end_line != 0) {
                sheet.place(section.line, 1,
                            "section(\"" + section.title + "\") {");
            }
            int depth = section.end_line != 0 ? 2 : 1;
            for (const auto& input : section.inputs) {
                std::string text = "input \"" + input.name + "\", \"" +
                                   input.capability + "\"";
                if (!input.options.empty())
                    text += ", " + render_args(input.options);
                sheet.place(input.line, depth, text);
            }
            if (section.end_line != 0) sheet.place(section.end_line, 1, "}");
        }
        sheet.place(prefs.end_line, 0, "}");
    }
    place_body(sheet, p.top_statements, 0);
    for (const auto& m : p.methods) {
        sheet.place(m.line, 0, method_signature(m) + " {");
        place_body(sheet, m.body, 1);
        sheet.place(m.end_line, 0, "}");
    }
    return sheet.compose(p.line_count);
}

}  // namespace smartslice
