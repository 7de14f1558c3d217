#include "smartslice/ssa.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "smartslice/errors.hpp"

namespace smartslice {

namespace {

/// Collects every identifier-shaped name in the program so generated
/// versions never collide with something that already exists.
class NameUniverse {
  public:
    explicit NameUniverse(const Program& p) {
        if (p.preferences)
            for (const auto& s : p.preferences->sections)
                for (const auto& i : s.inputs) names_.insert(i.name);
        for (const auto& m : p.methods) {
            names_.insert(m.name);
            for (const auto& param : m.params) names_.insert(param);
        }
        for_each_stmt(p, [&](const Stmt& s) {
            std::visit(
                [&](const auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, Assignment>)
                        names_.insert(node.target.base);
                },
                s.node);
            collect_stmt(s);
        });
    }

    bool contains(const std::string& name) const { return names_.count(name) > 0; }
    void add(const std::string& name) { names_.insert(name); }

  private:
    void collect_stmt(const Stmt& s) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Assignment>) {
                    collect_expr(node.value);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    collect_expr(node.expr);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    for (const auto& e : node.value) collect_expr(e);
                } else if constexpr (std::is_same_v<T, SubscribeStmt>) {
                    names_.insert(node.device);
                }
            },
            s.node);
    }

    void collect_expr(const Expr& e) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Identifier>) {
                    names_.insert(node.name);
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    for (const auto& slot : node.slots) names_.insert(slot.ident);
                } else if constexpr (std::is_same_v<T, Call>) {
                    names_.insert(node.name);
                    for (const auto& r : node.receiver) collect_expr(r);
                    for (const auto& a : node.args) collect_expr(a.value);
                } else if constexpr (std::is_same_v<T, Property>) {
                    collect_expr(node.base[0]);
                } else if constexpr (std::is_same_v<T, Binary> ||
                                     std::is_same_v<T, Unary>) {
                    for (const auto& o : node.operands) collect_expr(o);
                } else if constexpr (std::is_same_v<T, ListLit>) {
                    for (const auto& el : node.elems) collect_expr(el);
                } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                    for (const auto& slot : node.name_slots) names_.insert(slot.ident);
                    for (const auto& a : node.args) collect_expr(a.value);
                }
            },
            e.node);
    }

    std::set<std::string> names_;
};

using Env = std::map<std::string, std::string>;  // original name -> current name

class Renamer {
  public:
    explicit Renamer(Program& p) : program_(p), universe_(p) {
        for (const auto& m : p.methods) {
            auto& locals = method_locals_[m.name];
            for (const auto& param : m.params) locals.insert(param);
            for_each_stmt(m.body, [&](const Stmt& s) {
                if (auto* a = std::get_if<Assignment>(&s.node))
                    if (a->declares && !a->target.is_property())
                        locals.insert(a->target.base);
            });
        }
    }

    void run() {
        // Document order: top-level statements and method bodies interleave
        // by line so the global counter stream follows the source.
        struct Item {
            int line;
            Stmt* stmt = nullptr;
            MethodDecl* method = nullptr;
        };
        std::vector<Item> items;
        for (auto& s : program_.top_statements) items.push_back({s.line, &s, nullptr});
        for (auto& m : program_.methods) items.push_back({m.line, nullptr, &m});
        std::stable_sort(items.begin(), items.end(),
                         [](const Item& a, const Item& b) { return a.line < b.line; });
        for (auto& item : items) {
            if (item.stmt) {
                rename_stmt(*item.stmt, global_env_, nullptr);
            } else {
                Env local;
                for (const auto& param : item.method->params) local[param] = param;
                for (auto& s : item.method->body)
                    rename_stmt(s, local, item.method);
            }
        }
    }

  private:
    bool is_local(const MethodDecl* method, const std::string& name) const {
        if (!method) return false;
        auto it = method_locals_.find(method->name);
        return it != method_locals_.end() && it->second.count(name) > 0;
    }

    std::string fresh_version(const std::string& scope, const std::string& name) {
        int& counter = counters_[scope + "\n" + name];
        std::string candidate;
        do {
            ++counter;
            candidate = name + std::to_string(counter);
        } while (universe_.contains(candidate));
        universe_.add(candidate);
        return candidate;
    }

    /// Current name for a use; throws when a method-local is read before
    /// any of its assignments.
    std::string lookup(const std::string& name, const Env& env,
                       const MethodDecl* method, int line) const {
        if (is_local(method, name)) {
            auto it = env.find(name);
            if (it == env.end())
                throw SsaError(line, "local variable '" + name +
                                         "' is used before it is assigned in " +
                                         method->name);
            return it->second;
        }
        auto it = global_env_.find(name);
        return it == global_env_.end() ? name : it->second;
    }

    void rename_stmt(Stmt& stmt, Env& env, const MethodDecl* method) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Assignment>) {
                    rename_expr(node.value, env, method, stmt.line);
                    if (!node.target.is_property()) assign(node.target, env, method);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    rename_expr(node.expr, env, method, stmt.line);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    for (auto& e : node.value) rename_expr(e, env, method, stmt.line);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    rename_expr(node.condition, env, method, stmt.line);
                    // Each branch renames from a fork of the incoming
                    // versions; afterwards the branch assigned last in
                    // document order supplies the visible version.
                    Env then_env = env;
                    for (auto& s : node.then_body) rename_stmt(s, then_env, method);
                    Env else_env = env;
                    for (auto& s : node.else_body) rename_stmt(s, else_env, method);
                    for (const auto& [name, version] : then_env)
                        if (!env.count(name) || env[name] != version) env[name] = version;
                    for (const auto& [name, version] : else_env)
                        if (!env.count(name) || env[name] != version) env[name] = version;
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    for (auto& s : node.body) rename_stmt(s, env, method);
                }
            },
            stmt.node);
    }

    void assign(AssignTarget& target, Env& env, const MethodDecl* method) {
        const std::string& name = target.base;
        if (name == "state") return;  // catalog source, never renamed
        bool local = is_local(method, name);
        std::string scope = local ? method->name : "";
        std::string version = fresh_version(scope, name);
        if (local)
            env[name] = version;
        else
            global_env_[name] = version;
        target.base = version;
    }

    void rename_slot(InterpSlot& slot, const Env& env, const MethodDecl* method,
                     int line) {
        if (slot.ident == "state" || slot.ident == "it") return;
        slot.ident = lookup(slot.ident, env, method, line);
    }

    void rename_expr(Expr& e, Env& env, const MethodDecl* method, int line) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Identifier>) {
                    if (node.name != "state" && node.name != "it")
                        node.name = lookup(node.name, env, method, line);
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    for (auto& slot : node.slots) rename_slot(slot, env, method, line);
                } else if constexpr (std::is_same_v<T, Call>) {
                    // Callee names and subscribe handler references are
                    // method names, not variables.
                    for (auto& r : node.receiver) rename_expr(r, env, method, line);
                    for (auto& a : node.args) rename_expr(a.value, env, method, line);
                    for (auto& c : node.trailing)
                        for (auto& s : c.body) rename_stmt(s, env, method);
                } else if constexpr (std::is_same_v<T, Property>) {
                    rename_expr(node.base[0], env, method, line);
                } else if constexpr (std::is_same_v<T, Binary> ||
                                     std::is_same_v<T, Unary>) {
                    for (auto& o : node.operands) rename_expr(o, env, method, line);
                } else if constexpr (std::is_same_v<T, ListLit>) {
                    for (auto& el : node.elems) rename_expr(el, env, method, line);
                } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                    for (auto& slot : node.name_slots)
                        rename_slot(slot, env, method, line);
                    for (auto& a : node.args) rename_expr(a.value, env, method, line);
                }
            },
            e.node);
    }

    Program& program_;
    NameUniverse universe_;
    std::map<std::string, std::set<std::string>> method_locals_;
    std::map<std::string, int> counters_;  // "scope\nname" -> C(V)
    Env global_env_;
};

/// True when every variable is already assigned at most once per scope.
bool single_assignment(const Program& p) {
    std::map<std::string, int> counts;  // "scope\nname" -> assignments
    std::map<std::string, std::set<std::string>> locals;
    for (const auto& m : p.methods) {
        auto& set = locals[m.name];
        for (const auto& param : m.params) set.insert(param);
        for_each_stmt(m.body, [&](const Stmt& s) {
            if (auto* a = std::get_if<Assignment>(&s.node))
                if (a->declares && !a->target.is_property())
                    set.insert(a->target.base);
        });
    }
    bool ok = true;
    auto count_body = [&](const std::vector<Stmt>& body, const std::string& scope,
                          const std::set<std::string>* local_names) {
        for_each_stmt(body, [&](const Stmt& s) {
            auto* a = std::get_if<Assignment>(&s.node);
            if (!a || a->target.is_property() || a->target.base == "state") return;
            bool local = local_names && local_names->count(a->target.base) > 0;
            std::string key = (local ? scope : "") + "\n" + a->target.base;
            if (++counts[key] > 1) ok = false;
        });
    };
    count_body(p.top_statements, "", nullptr);
    for (const auto& m : p.methods) count_body(m.body, m.name, &locals[m.name]);
    return ok;
}

}  // namespace

Program to_ssa(const Program& p) {
    if (single_assignment(p)) return p;
    Program out = p;
    Renamer(out).run();
    return out;
}

}  // namespace smartslice
