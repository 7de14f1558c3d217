#include "smartslice/clone.hpp"

#include <algorithm>
#include <set>

namespace smartslice {

namespace {

void shift_stmt(Stmt& s, int offset, Program& fresh_ids);

void shift_expr_lines(Expr& e, int offset, Program& fresh_ids) {
    e.line += offset;
    std::visit(
        [&](auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ListLit>) {
                for (auto& el : node.elems) shift_expr_lines(el, offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (auto& r : node.receiver) shift_expr_lines(r, offset, fresh_ids);
                for (auto& a : node.args) shift_expr_lines(a.value, offset, fresh_ids);
                for (auto& c : node.trailing)
                    for (auto& inner : c.body) shift_stmt(inner, offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, Property>) {
                shift_expr_lines(node.base[0], offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, Binary> ||
                                 std::is_same_v<T, Unary>) {
                for (auto& o : node.operands) shift_expr_lines(o, offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                for (auto& a : node.args) shift_expr_lines(a.value, offset, fresh_ids);
            }
        },
        e.node);
}

void shift_stmt(Stmt& s, int offset, Program& fresh_ids) {
    s.id = fresh_ids.fresh_id();
    s.line += offset;
    std::visit(
        [&](auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Assignment>) {
                shift_expr_lines(node.value, offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                shift_expr_lines(node.expr, offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                for (auto& e : node.value) shift_expr_lines(e, offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                shift_expr_lines(node.condition, offset, fresh_ids);
                node.then_end_line += offset;
                if (node.has_else) node.else_line += offset;
                node.end_line += offset;
                for (auto& inner : node.then_body) shift_stmt(inner, offset, fresh_ids);
                for (auto& inner : node.else_body) shift_stmt(inner, offset, fresh_ids);
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                node.end_line += offset;
                for (auto& inner : node.body) shift_stmt(inner, offset, fresh_ids);
            }
        },
        s.node);
}

class Cloner {
  public:
    Cloner(const Program& p, int max_depth)
        : max_depth_(max_depth), result_{p, {}, {}} {
        for (const auto& m : p.methods) {
            originals_[m.name] = m;  // snapshot before any call renaming
            names_.insert(m.name);
        }
        for_each_stmt(p, [&](const Stmt& s) {
            if (auto* a = std::get_if<Assignment>(&s.node)) names_.insert(a->target.base);
        });
        find_recursive();
        next_line_ = std::max(p.line_count, max_decl_line());
    }

    CloneResult run() {
        Program& prog = result_.program;
        for (auto& s : prog.top_statements) rewrite_stmt(s, 0);
        // Appended clones extend the list while we walk it; their bodies
        // are rewritten at their own depth.
        for (size_t i = 0; i < prog.methods.size(); ++i) {
            int depth = i < depth_of_.size() ? depth_of_[i] : 0;
            for (auto& s : prog.methods[i].body) rewrite_stmt(s, depth);
        }
        return std::move(result_);
    }

  private:
    int max_decl_line() const {
        int line = 0;
        for (const auto& m : result_.program.methods)
            line = std::max(line, m.end_line);
        return line;
    }

    void find_recursive() {
        // m is recursive when m can reach itself through user-method calls.
        std::map<std::string, std::set<std::string>> edges;
        for (const auto& [name, method] : originals_) collect_callees(method.body, edges[name]);
        for (const auto& [name, _] : originals_) {
            std::set<std::string> seen;
            std::vector<std::string> stack(edges[name].begin(), edges[name].end());
            while (!stack.empty()) {
                std::string cur = stack.back();
                stack.pop_back();
                if (!seen.insert(cur).second) continue;
                if (cur == name) {
                    recursive_.insert(name);
                    break;
                }
                for (const auto& next : edges[cur]) stack.push_back(next);
            }
        }
    }

    void collect_callees(const std::vector<Stmt>& body, std::set<std::string>& out) {
        for_each_stmt(body, [&](const Stmt& s) {
            std::visit(
                [&](const auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, Assignment>) {
                        collect_callees_expr(node.value, out);
                    } else if constexpr (std::is_same_v<T, ExprStmt>) {
                        collect_callees_expr(node.expr, out);
                    } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                        for (const auto& e : node.value) collect_callees_expr(e, out);
                    }
                },
                s.node);
        });
    }

    void collect_callees_expr(const Expr& e, std::set<std::string>& out) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Call>) {
                    if (node.receiver.empty() && originals_.count(node.name))
                        out.insert(node.name);
                    for (const auto& r : node.receiver) collect_callees_expr(r, out);
                    for (const auto& a : node.args) collect_callees_expr(a.value, out);
                } else if constexpr (std::is_same_v<T, Property>) {
                    collect_callees_expr(node.base[0], out);
                } else if constexpr (std::is_same_v<T, Binary> ||
                                     std::is_same_v<T, Unary>) {
                    for (const auto& o : node.operands) collect_callees_expr(o, out);
                } else if constexpr (std::is_same_v<T, ListLit>) {
                    for (const auto& el : node.elems) collect_callees_expr(el, out);
                } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                    for (const auto& a : node.args) collect_callees_expr(a.value, out);
                }
            },
            e.node);
    }

    void rewrite_stmt(Stmt& s, int depth) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Assignment>) {
                    rewrite_expr(node.value, depth);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    rewrite_expr(node.expr, depth);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    for (auto& e : node.value) rewrite_expr(e, depth);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    for (auto& inner : node.then_body) rewrite_stmt(inner, depth);
                    for (auto& inner : node.else_body) rewrite_stmt(inner, depth);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    for (auto& inner : node.body) rewrite_stmt(inner, depth);
                }
            },
            s.node);
    }

    void rewrite_expr(Expr& e, int depth) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Call>) {
                    if (node.receiver.empty() && originals_.count(node.name))
                        rewrite_call_site(node, depth);
                    for (auto& r : node.receiver) rewrite_expr(r, depth);
                    for (auto& a : node.args) rewrite_expr(a.value, depth);
                    for (auto& c : node.trailing)
                        for (auto& inner : c.body) rewrite_stmt(inner, depth);
                } else if constexpr (std::is_same_v<T, Property>) {
                    rewrite_expr(node.base[0], depth);
                } else if constexpr (std::is_same_v<T, Binary> ||
                                     std::is_same_v<T, Unary>) {
                    for (auto& o : node.operands) rewrite_expr(o, depth);
                } else if constexpr (std::is_same_v<T, ListLit>) {
                    for (auto& el : node.elems) rewrite_expr(el, depth);
                } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                    // Reflective targets are unknown statically; never cloned.
                    for (auto& a : node.args) rewrite_expr(a.value, depth);
                }
            },
            e.node);
    }

    void rewrite_call_site(Call& call, int depth) {
        const std::string& callee = call.name;
        if (recursive_.count(callee)) {
            warn_once("recursive method '" + callee + "' is not cloned");
            return;
        }
        if (depth >= max_depth_) {
            warn_once("clone depth cap reached; call to '" + callee +
                      "' left unresolved");
            return;
        }
        std::string fresh = fresh_clone_name(callee);
        const MethodDecl& original = originals_.at(callee);

        MethodDecl clone = original;
        clone.name = fresh;
        int new_line = next_line_ + 2;
        int offset = new_line - original.line;
        clone.id = result_.program.fresh_id();
        clone.line = new_line;
        clone.end_line += offset;
        for (auto& s : clone.body) shift_stmt(s, offset, result_.program);
        next_line_ = clone.end_line;
        result_.program.line_count = std::max(result_.program.line_count, next_line_);

        while (depth_of_.size() < result_.program.methods.size())
            depth_of_.push_back(0);
        result_.program.methods.push_back(std::move(clone));
        depth_of_.push_back(depth + 1);

        result_.clones.push_back(CloneInfo{fresh, callee, original.line, new_line});
        call.name = fresh;
    }

    std::string fresh_clone_name(const std::string& base) {
        int& counter = site_counters_[base];
        std::string candidate;
        do {
            ++counter;
            candidate = base + std::to_string(counter);
        } while (names_.count(candidate));
        names_.insert(candidate);
        return candidate;
    }

    void warn_once(const std::string& message) {
        if (warned_.insert(message).second) result_.warnings.push_back(message);
    }

    int max_depth_;
    CloneResult result_;
    std::map<std::string, MethodDecl> originals_;
    std::set<std::string> recursive_;
    std::set<std::string> names_;
    std::map<std::string, int> site_counters_;
    std::set<std::string> warned_;
    std::vector<int> depth_of_;
    int next_line_ = 0;
};

}  // namespace

std::map<int, int> CloneResult::origin_lines() const {
    std::map<int, int> out;
    for (const auto& info : clones) out[info.clone_line] = info.original_line;
    return out;
}

CloneResult clone_methods(const Program& p, int max_depth) {
    return Cloner(p, max_depth).run();
}

}  // namespace smartslice
