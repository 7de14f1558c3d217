#include "smartslice/ast.hpp"

namespace smartslice {

std::string StringLit::text() const {
    std::string out = segments.empty() ? "" : segments[0];
    for (size_t i = 0; i < slots.size(); ++i) {
        out += '$';
        std::string body = slots[i].ident;
        for (const auto& m : slots[i].members) body += "." + m;
        out += slots[i].braced ? "{" + body + "}" : body;
        if (i + 1 < segments.size()) out += segments[i + 1];
    }
    return out;
}

std::string AssignTarget::display() const {
    std::string out = base;
    for (const auto& m : members) out += "." + m;
    return out;
}

const MethodDecl* Program::find_method(const std::string& name) const {
    for (const auto& m : methods)
        if (m.name == name) return &m;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Traversal

namespace {

template <typename StmtT, typename Fn>
void walk_stmt(StmtT& stmt, const Fn& fn);

template <typename ExprT, typename Fn>
void walk_expr_stmts(ExprT& expr, const Fn& fn) {
    std::visit(
        [&](auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ListLit>) {
                for (auto& e : node.elems) walk_expr_stmts(e, fn);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (auto& r : node.receiver) walk_expr_stmts(r, fn);
                for (auto& a : node.args) walk_expr_stmts(a.value, fn);
                for (auto& c : node.trailing)
                    for (auto& s : c.body) walk_stmt(s, fn);
            } else if constexpr (std::is_same_v<T, Property>) {
                for (auto& b : node.base) walk_expr_stmts(b, fn);
            } else if constexpr (std::is_same_v<T, Binary> ||
                                 std::is_same_v<T, Unary>) {
                for (auto& o : node.operands) walk_expr_stmts(o, fn);
            } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                for (auto& a : node.args) walk_expr_stmts(a.value, fn);
            }
        },
        expr.node);
}

template <typename StmtT, typename Fn>
void walk_stmt(StmtT& stmt, const Fn& fn) {
    fn(stmt);
    std::visit(
        [&](auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Assignment>) {
                walk_expr_stmts(node.value, fn);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                walk_expr_stmts(node.expr, fn);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                for (auto& s : node.then_body) walk_stmt(s, fn);
                for (auto& s : node.else_body) walk_stmt(s, fn);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                for (auto& e : node.value) walk_expr_stmts(e, fn);
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                for (auto& s : node.body) walk_stmt(s, fn);
            }
        },
        stmt.node);
}

}  // namespace

void for_each_stmt(const Program& p, const std::function<void(const Stmt&)>& fn) {
    for (const auto& s : p.top_statements) walk_stmt(s, fn);
    for (const auto& m : p.methods)
        for (const auto& s : m.body) walk_stmt(s, fn);
}

void for_each_stmt(Program& p, const std::function<void(Stmt&)>& fn) {
    for (auto& s : p.top_statements) walk_stmt(s, fn);
    for (auto& m : p.methods)
        for (auto& s : m.body) walk_stmt(s, fn);
}

void for_each_stmt(const std::vector<Stmt>& body,
                   const std::function<void(const Stmt&)>& fn) {
    for (const auto& s : body) walk_stmt(s, fn);
}

// ---------------------------------------------------------------------------
// Structural equality

namespace {

bool eq(const Expr& a, const Expr& b);
bool eq(const Stmt& a, const Stmt& b);

bool eq(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

bool eq(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

bool eq(const InterpSlot& a, const InterpSlot& b) {
    return a.ident == b.ident && a.members == b.members && a.braced == b.braced;
}

bool eq(const StringLit& a, const StringLit& b) {
    if (a.segments != b.segments || a.slots.size() != b.slots.size()) return false;
    for (size_t i = 0; i < a.slots.size(); ++i)
        if (!eq(a.slots[i], b.slots[i])) return false;
    return true;
}

bool eq(const std::vector<Arg>& a, const std::vector<Arg>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name) return false;
        if (!eq(a[i].value, b[i].value)) return false;
    }
    return true;
}

bool eq(const Expr& a, const Expr& b) {
    if (a.line != b.line || a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Identifier>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, StringLit>) {
                return eq(x, y);
            } else if constexpr (std::is_same_v<T, NumberLit>) {
                return x.text == y.text;
            } else if constexpr (std::is_same_v<T, KeywordLit>) {
                return x.text == y.text;
            } else if constexpr (std::is_same_v<T, ListLit>) {
                return eq(x.elems, y.elems);
            } else if constexpr (std::is_same_v<T, Call>) {
                if (x.name != y.name) return false;
                if (!eq(x.receiver, y.receiver)) return false;
                if (!eq(x.args, y.args)) return false;
                if (x.trailing.size() != y.trailing.size()) return false;
                for (size_t i = 0; i < x.trailing.size(); ++i)
                    if (!eq(x.trailing[i].body, y.trailing[i].body)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, Property>) {
                return x.member == y.member && eq(x.base, y.base);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return x.op == y.op && eq(x.operands, y.operands);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return x.op == y.op && eq(x.operands, y.operands);
            } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                if (x.bare != y.bare) return false;
                if (x.name_slots.size() != y.name_slots.size()) return false;
                for (size_t i = 0; i < x.name_slots.size(); ++i)
                    if (!eq(x.name_slots[i], y.name_slots[i])) return false;
                return eq(x.args, y.args);
            } else {
                return false;
            }
        },
        a.node);
}

bool eq(const Stmt& a, const Stmt& b) {
    if (a.line != b.line || a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Assignment>) {
                return x.declares == y.declares && x.target.base == y.target.base &&
                       x.target.members == y.target.members && eq(x.value, y.value);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                return eq(x.expr, y.expr);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                return eq(x.condition, y.condition) && x.has_else == y.has_else &&
                       eq(x.then_body, y.then_body) && eq(x.else_body, y.else_body);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                return eq(x.value, y.value);
            } else if constexpr (std::is_same_v<T, SubscribeStmt>) {
                return x.device == y.device && x.handler == y.handler &&
                       eq(x.event, y.event);
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                return x.header == y.header && eq(x.body, y.body);
            } else {
                return false;
            }
        },
        a.node);
}

}  // namespace

bool equals(const Expr& a, const Expr& b) { return eq(a, b); }
bool equals(const Stmt& a, const Stmt& b) { return eq(a, b); }

bool equals(const Program& a, const Program& b) {
    if (a.methods.size() != b.methods.size()) return false;
    for (size_t i = 0; i < a.methods.size(); ++i) {
        const auto& ma = a.methods[i];
        const auto& mb = b.methods[i];
        if (ma.name != mb.name || ma.line != mb.line || ma.params != mb.params ||
            ma.visibility != mb.visibility || !eq(ma.body, mb.body))
            return false;
    }
    if (!eq(a.top_statements, b.top_statements)) return false;
    if (a.definition.has_value() != b.definition.has_value()) return false;
    if (a.definition && a.definition->raw_lines != b.definition->raw_lines)
        return false;
    if (a.preferences.has_value() != b.preferences.has_value()) return false;
    if (a.preferences) {
        const auto& pa = a.preferences->sections;
        const auto& pb = b.preferences->sections;
        if (pa.size() != pb.size()) return false;
        for (size_t i = 0; i < pa.size(); ++i) {
            if (pa[i].title != pb[i].title) return false;
            if (pa[i].inputs.size() != pb[i].inputs.size()) return false;
            for (size_t j = 0; j < pa[i].inputs.size(); ++j) {
                const auto& ia = pa[i].inputs[j];
                const auto& ib = pb[i].inputs[j];
                if (ia.name != ib.name || ia.capability != ib.capability ||
                    ia.line != ib.line || !eq(ia.options, ib.options))
                    return false;
            }
        }
    }
    return true;
}

}  // namespace smartslice
