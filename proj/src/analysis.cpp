#include "smartslice/analysis.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "smartslice/render.hpp"

namespace smartslice {

namespace {

// ---------------------------------------------------------------------------
// Program index: statements, scopes, assignments, call sites.

struct StmtInfo {
    const Stmt* stmt = nullptr;
    int method_idx = -1;  // index into Program::methods, -1 for top level
};

struct AssignInfo {
    int stmt_id = 0;
    int method_idx = -1;
    std::string name;
    bool declares = false;
};

struct CallSite {
    int stmt_id = 0;
    const Call* call = nullptr;
};

struct ReflectiveSite {
    int stmt_id = 0;
    const ReflectiveCall* call = nullptr;
};

class Index {
  public:
    Index(const Program& p, const Catalog& cat) : program_(p), sources_(p, cat) {
        for (size_t mi = 0; mi < p.methods.size(); ++mi) {
            const auto& m = p.methods[mi];
            method_by_name_[m.name] = static_cast<int>(mi);
            for (const auto& s : m.body) collect(s, static_cast<int>(mi));
        }
        for (const auto& s : p.top_statements) collect(s, -1);
    }

    const Program& program() const { return program_; }
    const SourceIndex& sources() const { return sources_; }

    const StmtInfo* stmt(int id) const {
        auto it = stmts_.find(id);
        return it == stmts_.end() ? nullptr : &it->second;
    }

    const MethodDecl* method(int idx) const {
        return idx < 0 ? nullptr : &program_.methods[idx];
    }

    int method_index(const std::string& name) const {
        auto it = method_by_name_.find(name);
        return it == method_by_name_.end() ? -1 : it->second;
    }

    bool is_user_method(const std::string& name) const {
        return method_by_name_.count(name) > 0;
    }

    bool is_local(int method_idx, const std::string& name) const {
        if (method_idx < 0) return false;
        auto it = locals_.find(method_idx);
        return it != locals_.end() && it->second.count(name) > 0;
    }

    int param_index(int method_idx, const std::string& name) const {
        const MethodDecl* m = method(method_idx);
        if (!m) return -1;
        for (size_t i = 0; i < m->params.size(); ++i)
            if (m->params[i] == name) return static_cast<int>(i);
        return -1;
    }

    /// Assignments that a read of `name` inside `method_idx` can see.
    std::vector<const AssignInfo*> matching_assignments(int method_idx,
                                                        const std::string& name) const {
        std::vector<const AssignInfo*> out;
        bool local = is_local(method_idx, name) || param_index(method_idx, name) >= 0;
        for (const auto& a : assignments_) {
            if (a.name != name) continue;
            if (local) {
                if (a.method_idx == method_idx) out.push_back(&a);
            } else {
                // Global stream: a method with `def name` keeps its
                // assignments to that name out of the global view.
                if (a.method_idx >= 0 && is_local(a.method_idx, name)) continue;
                out.push_back(&a);
            }
        }
        return out;
    }

    const std::vector<CallSite>& call_sites(const std::string& method_name) const {
        static const std::vector<CallSite> empty;
        auto it = call_sites_.find(method_name);
        return it == call_sites_.end() ? empty : it->second;
    }

    const std::vector<int>& returns_of(int method_idx) const {
        static const std::vector<int> empty;
        auto it = returns_.find(method_idx);
        return it == returns_.end() ? empty : it->second;
    }

    const std::vector<int>& subscribes_registering(const std::string& handler) const {
        static const std::vector<int> empty;
        auto it = subscribes_.find(handler);
        return it == subscribes_.end() ? empty : it->second;
    }

    int stmt_count() const { return static_cast<int>(stmts_.size()); }

  private:
    void collect(const Stmt& s, int method_idx) {
        stmts_[s.id] = StmtInfo{&s, method_idx};
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Assignment>) {
                    if (!node.target.is_property()) {
                        assignments_.push_back(
                            AssignInfo{s.id, method_idx, node.target.base,
                                       node.declares});
                        if (node.declares && method_idx >= 0)
                            locals_[method_idx].insert(node.target.base);
                    }
                    collect_expr(node.value, s.id, method_idx);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    collect_expr(node.expr, s.id, method_idx);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (method_idx >= 0) returns_[method_idx].push_back(s.id);
                    for (const auto& e : node.value) collect_expr(e, s.id, method_idx);
                } else if constexpr (std::is_same_v<T, SubscribeStmt>) {
                    subscribes_[node.handler].push_back(s.id);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    for (const auto& inner : node.then_body) collect(inner, method_idx);
                    for (const auto& inner : node.else_body) collect(inner, method_idx);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    for (const auto& inner : node.body) collect(inner, method_idx);
                }
            },
            s.node);
    }

    void collect_expr(const Expr& e, int stmt_id, int method_idx) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Call>) {
                    if (node.receiver.empty())
                        call_sites_[node.name].push_back(CallSite{stmt_id, &node});
                    for (const auto& r : node.receiver)
                        collect_expr(r, stmt_id, method_idx);
                    for (const auto& a : node.args)
                        collect_expr(a.value, stmt_id, method_idx);
                    for (const auto& c : node.trailing)
                        for (const auto& inner : c.body) collect(inner, method_idx);
                } else if constexpr (std::is_same_v<T, Property>) {
                    collect_expr(node.base[0], stmt_id, method_idx);
                } else if constexpr (std::is_same_v<T, Binary> ||
                                     std::is_same_v<T, Unary>) {
                    for (const auto& o : node.operands)
                        collect_expr(o, stmt_id, method_idx);
                } else if constexpr (std::is_same_v<T, ListLit>) {
                    for (const auto& el : node.elems)
                        collect_expr(el, stmt_id, method_idx);
                } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                    for (const auto& a : node.args)
                        collect_expr(a.value, stmt_id, method_idx);
                }
            },
            e.node);
    }

    const Program& program_;
    SourceIndex sources_;
    std::map<int, StmtInfo> stmts_;
    std::map<std::string, int> method_by_name_;
    std::map<int, std::set<std::string>> locals_;  // method idx -> def names
    std::vector<AssignInfo> assignments_;
    std::map<std::string, std::vector<CallSite>> call_sites_;
    std::map<int, std::vector<int>> returns_;               // method idx -> stmt ids
    std::map<std::string, std::vector<int>> subscribes_;    // handler -> stmt ids
};

// ---------------------------------------------------------------------------
// Use collection: what data a statement reads.

struct Uses {
    std::vector<std::string> vars;
    std::vector<std::pair<std::string, std::string>> props;  // base, member
    std::vector<std::string> result_calls;  // user methods whose result is used
    bool reflective_result = false;
};

void collect_expr_uses(const Expr& e, const Index& index, Uses& uses,
                       const std::string& closure_base);

void collect_stmt_exprs_inline(const Stmt& s, const Index& index, Uses& uses,
                               const std::string& closure_base) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Assignment>) {
                collect_expr_uses(node.value, index, uses, closure_base);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                collect_expr_uses(node.expr, index, uses, closure_base);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                for (const auto& e : node.value)
                    collect_expr_uses(e, index, uses, closure_base);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                // Condition reads are implicit flows: not traced.
                for (const auto& inner : node.then_body)
                    collect_stmt_exprs_inline(inner, index, uses, closure_base);
                for (const auto& inner : node.else_body)
                    collect_stmt_exprs_inline(inner, index, uses, closure_base);
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                for (const auto& inner : node.body)
                    collect_stmt_exprs_inline(inner, index, uses, closure_base);
            }
        },
        s.node);
}

void collect_slot_uses(const std::vector<InterpSlot>& slots, Uses& uses) {
    for (const auto& slot : slots) {
        if (slot.members.empty())
            uses.vars.push_back(slot.ident);
        else
            uses.props.emplace_back(slot.ident, slot.members[0]);
    }
}

void collect_expr_uses(const Expr& e, const Index& index, Uses& uses,
                       const std::string& closure_base) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Identifier>) {
                if (node.name == "it" && !closure_base.empty())
                    uses.vars.push_back(closure_base);
                else
                    uses.vars.push_back(node.name);
            } else if constexpr (std::is_same_v<T, StringLit>) {
                collect_slot_uses(node.slots, uses);
            } else if constexpr (std::is_same_v<T, Property>) {
                if (auto* base = std::get_if<Identifier>(&node.base[0].node)) {
                    std::string name = base->name;
                    if (name == "it" && !closure_base.empty()) name = closure_base;
                    uses.props.emplace_back(name, node.member);
                } else {
                    collect_expr_uses(node.base[0], index, uses, closure_base);
                }
            } else if constexpr (std::is_same_v<T, Call>) {
                bool user = node.receiver.empty() && index.is_user_method(node.name);
                if (user) {
                    // Result flows here; arguments flow through the callee's
                    // parameters and are traced by the parameter channel.
                    uses.result_calls.push_back(node.name);
                } else {
                    for (const auto& r : node.receiver)
                        collect_expr_uses(r, index, uses, closure_base);
                    for (const auto& a : node.args)
                        collect_expr_uses(a.value, index, uses, closure_base);
                }
                std::string base = closure_base;
                if (!node.receiver.empty())
                    if (auto* rid = std::get_if<Identifier>(&node.receiver[0].node))
                        base = rid->name;
                for (const auto& c : node.trailing)
                    for (const auto& inner : c.body)
                        collect_stmt_exprs_inline(inner, index, uses, base);
            } else if constexpr (std::is_same_v<T, Binary> ||
                                 std::is_same_v<T, Unary>) {
                for (const auto& o : node.operands)
                    collect_expr_uses(o, index, uses, closure_base);
            } else if constexpr (std::is_same_v<T, ListLit>) {
                for (const auto& el : node.elems)
                    collect_expr_uses(el, index, uses, closure_base);
            } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                uses.reflective_result = true;
                collect_slot_uses(node.name_slots, uses);
                for (const auto& a : node.args)
                    collect_expr_uses(a.value, index, uses, closure_base);
            }
        },
        e.node);
}

/// Uses of a whole statement. A bare user-method call statement discards
/// its result, so only the parameter channel applies to it.
Uses collect_uses(const Stmt& s, const Index& index) {
    Uses uses;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Assignment>) {
                collect_expr_uses(node.value, index, uses, "");
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                if (auto* call = std::get_if<Call>(&node.expr.node)) {
                    if (call->receiver.empty() && index.is_user_method(call->name)) {
                        for (const auto& c : call->trailing)
                            for (const auto& inner : c.body)
                                collect_stmt_exprs_inline(inner, index, uses, "");
                        return;  // discarded result
                    }
                }
                collect_expr_uses(node.expr, index, uses, "");
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                for (const auto& e : node.value)
                    collect_expr_uses(e, index, uses, "");
            } else if constexpr (std::is_same_v<T, SubscribeStmt>) {
                uses.vars.push_back(node.device);
            }
        },
        s.node);
    return uses;
}

bool expr_has_data(const Expr& e) {
    bool found = false;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Identifier> ||
                          std::is_same_v<T, Property> ||
                          std::is_same_v<T, Call> ||
                          std::is_same_v<T, ReflectiveCall>) {
                found = true;
            } else if constexpr (std::is_same_v<T, StringLit>) {
                found = !node.slots.empty();
            } else if constexpr (std::is_same_v<T, Binary> ||
                                 std::is_same_v<T, Unary>) {
                for (const auto& o : node.operands)
                    if (expr_has_data(o)) found = true;
            } else if constexpr (std::is_same_v<T, ListLit>) {
                for (const auto& el : node.elems)
                    if (expr_has_data(el)) found = true;
            }
        },
        e.node);
    return found;
}

// ---------------------------------------------------------------------------
// The fixed-point engine.

class Tracer {
  public:
    Tracer(const Index& index, Markup& markup) : index_(index), markup_(markup) {}

    void run(TraceStats* stats) {
        for (int id : markup_.sink_stmts) pending_stmts_.push_back(id);
        int waves = 0;
        while (!pending_stmts_.empty() || !pending_params_.empty()) {
            ++waves;
            auto stmts = std::move(pending_stmts_);
            auto params = std::move(pending_params_);
            pending_stmts_.clear();
            pending_params_.clear();
            for (int id : stmts) process_stmt(id);
            for (const auto& key : params) process_param(key);
        }
        if (stats) {
            stats->waves = waves;
            stats->entities = index_.stmt_count();
        }
    }

  private:
    void tag_stmt(int id, int target_line) {
        markup_.stmt_forwards[id].insert(target_line);
        // New target lines never change a statement's uses, so a statement
        // is processed at most once.
        if (processed_stmts_.count(id) || queued_stmts_.count(id)) return;
        queued_stmts_.insert(id);
        pending_stmts_.push_back(id);
    }

    void tag_param(const ParamKey& key, int target_line) {
        markup_.param_forwards[key].insert(target_line);
        if (processed_params_.count(key) || queued_params_.count(key)) return;
        queued_params_.insert(key);
        pending_params_.push_back(key);
    }

    void mark_source(int stmt_id, SourceKind kind) {
        markup_.stmt_sources.emplace(stmt_id, kind);
    }

    void process_stmt(int id) {
        processed_stmts_.insert(id);
        queued_stmts_.erase(id);
        const StmtInfo* info = index_.stmt(id);
        if (!info) return;
        Uses uses = collect_uses(*info->stmt, index_);
        apply_uses(id, info, uses);
    }

    void apply_uses(int id, const StmtInfo* info, const Uses& uses) {
        const auto& sources = index_.sources();
        int line = info->stmt->line;
        for (const auto& name : uses.vars) {
            if (auto kind = sources.classify_identifier(name)) {
                mark_source(id, *kind);
                continue;  // propagation stops along a source edge
            }
            propagate_variable(name, info->method_idx, line);
        }
        for (const auto& [base, member] : uses.props) {
            if (auto kind = sources.classify_property(base, member)) {
                mark_source(id, *kind);
                continue;
            }
            propagate_variable(base, info->method_idx, line);
        }
        for (const auto& callee : uses.result_calls) {
            int mi = index_.method_index(callee);
            for (int ret_id : index_.returns_of(mi)) tag_stmt(ret_id, line);
        }
        if (uses.reflective_result) {
            // The callee is a string value: conservatively link every
            // user-defined method's returns.
            for (size_t mi = 0; mi < index_.program().methods.size(); ++mi)
                for (int ret_id : index_.returns_of(static_cast<int>(mi)))
                    tag_stmt(ret_id, line);
        }
    }

    void propagate_variable(const std::string& name, int method_idx, int line) {
        int pi = index_.param_index(method_idx, name);
        if (pi >= 0)
            tag_param(ParamKey{index_.method(method_idx)->id, pi}, line);
        for (const AssignInfo* a : index_.matching_assignments(method_idx, name))
            tag_stmt(a->stmt_id, line);
    }

    void process_param(const ParamKey& key) {
        processed_params_.insert(key);
        queued_params_.erase(key);
        const MethodDecl* method = nullptr;
        int method_idx = -1;
        for (size_t mi = 0; mi < index_.program().methods.size(); ++mi) {
            if (index_.program().methods[mi].id == key.method_id) {
                method = &index_.program().methods[mi];
                method_idx = static_cast<int>(mi);
                break;
            }
        }
        if (!method) return;
        // Argument channel: the value feeding this parameter at every call
        // site joins the flow.
        for (const auto& site : index_.call_sites(method->name)) {
            const Expr* arg = positional_arg(*site.call, key.param_index);
            if (!arg || !expr_has_data(*arg)) continue;
            tag_stmt(site.stmt_id, method->line);
            const StmtInfo* info = index_.stmt(site.stmt_id);
            Uses uses;
            collect_expr_uses(*arg, index_, uses, "");
            apply_uses(site.stmt_id, info, uses);
        }
        // Subscribe channel: the registration feeds the handler parameter.
        if (index_.sources().catalog().enabled(SourceKind::EventParam))
            for (int sub_id : index_.subscribes_registering(method->name))
                tag_stmt(sub_id, method->line);
    }

    static const Expr* positional_arg(const Call& call, int index) {
        int seen = 0;
        for (const auto& a : call.args) {
            if (a.name) continue;
            if (seen == index) return &a.value;
            ++seen;
        }
        return nullptr;
    }

    const Index& index_;
    Markup& markup_;
    std::deque<int> pending_stmts_;
    std::deque<ParamKey> pending_params_;
    std::set<int> processed_stmts_, queued_stmts_;
    std::set<ParamKey> processed_params_, queued_params_;
};

bool stmt_contains_sink_call(const Stmt& s, const Catalog& cat);

bool expr_contains_sink_call(const Expr& e, const Catalog& cat) {
    bool found = false;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Call>) {
                if (node.receiver.empty() && cat.is_sink(node.name)) found = true;
                for (const auto& r : node.receiver)
                    if (expr_contains_sink_call(r, cat)) found = true;
                for (const auto& a : node.args)
                    if (expr_contains_sink_call(a.value, cat)) found = true;
            } else if constexpr (std::is_same_v<T, Property>) {
                if (expr_contains_sink_call(node.base[0], cat)) found = true;
            } else if constexpr (std::is_same_v<T, Binary> ||
                                 std::is_same_v<T, Unary>) {
                for (const auto& o : node.operands)
                    if (expr_contains_sink_call(o, cat)) found = true;
            } else if constexpr (std::is_same_v<T, ListLit>) {
                for (const auto& el : node.elems)
                    if (expr_contains_sink_call(el, cat)) found = true;
            } else if constexpr (std::is_same_v<T, ReflectiveCall>) {
                for (const auto& a : node.args)
                    if (expr_contains_sink_call(a.value, cat)) found = true;
            }
        },
        e.node);
    return found;
}

bool stmt_contains_sink_call(const Stmt& s, const Catalog& cat) {
    bool found = false;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Assignment>) {
                found = expr_contains_sink_call(node.value, cat);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                found = expr_contains_sink_call(node.expr, cat);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                for (const auto& e : node.value)
                    if (expr_contains_sink_call(e, cat)) found = true;
            }
        },
        s.node);
    return found;
}

}  // namespace

Markup mark_sinks(const Program& p, const Catalog& cat) {
    Markup m;
    for_each_stmt(p, [&](const Stmt& s) {
        if (stmt_contains_sink_call(s, cat)) m.sink_stmts.insert(s.id);
    });
    return m;
}

Markup trace_backward(const Program& p, Markup m, const Catalog& cat,
                      TraceStats* stats) {
    Index index(p, cat);
    Tracer tracer(index, m);
    tracer.run(stats);
    return m;
}

FlowReport analyze_program(const Program& p, const Catalog& cat, Markup* markup_out) {
    Markup m = trace_backward(p, mark_sinks(p, cat), cat);
    FlowReport report = extract_flows(p, m, cat);
    if (markup_out) *markup_out = std::move(m);
    return report;
}

// ---------------------------------------------------------------------------
// Flow extraction: root-to-sink paths in the tag tree.

namespace {

struct Node {
    bool is_param = false;
    int stmt_id = 0;
    ParamKey param{};
    int line = 0;
    std::vector<int> targets;  // lines
    bool is_sink = false;
    std::optional<SourceKind> source;
    std::string sink_name;
};

std::string first_sink_name(const Stmt& s, const Catalog& cat);

std::string first_sink_name_expr(const Expr& e, const Catalog& cat) {
    std::string found;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Call>) {
                if (found.empty() && node.receiver.empty() && cat.is_sink(node.name))
                    found = node.name;
                for (const auto& a : node.args) {
                    if (!found.empty()) break;
                    found = first_sink_name_expr(a.value, cat);
                }
            } else if constexpr (std::is_same_v<T, Binary> ||
                                 std::is_same_v<T, Unary>) {
                for (const auto& o : node.operands) {
                    if (!found.empty()) break;
                    found = first_sink_name_expr(o, cat);
                }
            }
        },
        e.node);
    return found;
}

std::string first_sink_name(const Stmt& s, const Catalog& cat) {
    std::string found;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Assignment>) {
                found = first_sink_name_expr(node.value, cat);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                found = first_sink_name_expr(node.expr, cat);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                for (const auto& e : node.value)
                    if (found.empty()) found = first_sink_name_expr(e, cat);
            }
        },
        s.node);
    return found;
}

}  // namespace

FlowReport extract_flows(const Program& p, const Markup& m, const Catalog& cat) {
    std::map<int, const Stmt*> stmt_by_id;
    std::map<int, const MethodDecl*> method_by_id;
    for_each_stmt(p, [&](const Stmt& s) { stmt_by_id[s.id] = &s; });
    for (const auto& mdecl : p.methods) method_by_id[mdecl.id] = &mdecl;

    std::vector<Node> nodes;
    std::map<int, std::vector<int>> by_line;  // line -> node indices

    auto add_node = [&](Node node) {
        by_line[node.line].push_back(static_cast<int>(nodes.size()));
        nodes.push_back(std::move(node));
    };

    for (const auto& [id, stmt] : stmt_by_id) {
        if (!m.stmt_tagged(id)) continue;
        Node node;
        node.stmt_id = id;
        node.line = stmt->line;
        if (auto it = m.stmt_forwards.find(id); it != m.stmt_forwards.end())
            node.targets.assign(it->second.begin(), it->second.end());
        node.is_sink = m.sink_stmts.count(id) > 0;
        if (node.is_sink) node.sink_name = first_sink_name(*stmt, cat);
        if (auto it = m.stmt_sources.find(id); it != m.stmt_sources.end())
            node.source = it->second;
        add_node(std::move(node));
    }
    for (const auto& [key, targets] : m.param_forwards) {
        Node node;
        node.is_param = true;
        node.param = key;
        auto it = method_by_id.find(key.method_id);
        if (it == method_by_id.end()) continue;
        node.line = it->second->line;
        node.targets.assign(targets.begin(), targets.end());
        add_node(std::move(node));
    }

    FlowReport report;
    std::set<std::vector<int>> seen_chains;

    // Depth-first over the tag tree from every source-tagged statement.
    std::vector<int> roots;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].source) roots.push_back(static_cast<int>(i));
    std::sort(roots.begin(), roots.end(),
              [&](int a, int b) { return nodes[a].line < nodes[b].line; });

    constexpr size_t kMaxFlows = 10000;
    std::vector<int> path;
    std::set<int> on_path;

    std::function<void(int)> dfs = [&](int idx) {
        if (report.flows.size() >= kMaxFlows) return;
        const Node& node = nodes[idx];
        path.push_back(idx);
        on_path.insert(idx);
        if (node.is_sink) {
            std::vector<int> chain;
            for (int ni : path)
                if (chain.empty() || chain.back() != nodes[ni].line)
                    chain.push_back(nodes[ni].line);
            if (seen_chains.insert(chain).second) {
                Flow flow;
                flow.chain = std::move(chain);
                flow.origin = nodes[path.front()].source;
                flow.sink_name = node.sink_name;
                report.flows.push_back(std::move(flow));
            }
        }
        for (int target_line : node.targets) {
            auto it = by_line.find(target_line);
            if (it == by_line.end()) continue;
            for (int next : it->second) {
                if (on_path.count(next)) continue;
                if (next == idx) continue;
                dfs(next);
            }
        }
        on_path.erase(idx);
        path.pop_back();
    };

    for (int root : roots) dfs(root);

    std::sort(report.flows.begin(), report.flows.end(),
              [](const Flow& a, const Flow& b) { return a.chain < b.chain; });
    report.leaking = !report.flows.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Slice rendering.

namespace {

std::string tag_text(const Markup& m, int stmt_id) {
    if (m.sink_stmts.count(stmt_id)) return "sink";
    std::string out;
    if (auto it = m.stmt_forwards.find(stmt_id); it != m.stmt_forwards.end())
        for (int line : it->second) out += std::to_string(line) + " ";
    if (!out.empty() && out.back() == ' ') out.pop_back();
    if (m.stmt_sources.count(stmt_id)) out += out.empty() ? "source" : " source";
    return out;
}

bool any_tagged(const std::vector<Stmt>& body, const Markup& m) {
    bool found = false;
    for_each_stmt(body, [&](const Stmt& s) {
        if (m.stmt_tagged(s.id)) found = true;
    });
    return found;
}

void render_slice_stmts(std::ostream& out, const std::vector<Stmt>& body,
                        const Markup& m, int depth) {
    std::string indent(static_cast<size_t>(depth) * 4, ' ');
    for (const auto& s : body) {
        if (auto* iff = std::get_if<IfStmt>(&s.node)) {
            bool then_tagged = any_tagged(iff->then_body, m);
            bool else_tagged = any_tagged(iff->else_body, m);
            if (!then_tagged && !else_tagged) continue;
            out << indent << "if (" << render_expr(iff->condition) << ") {\n";
            if (then_tagged) render_slice_stmts(out, iff->then_body, m, depth + 1);
            if (else_tagged) {
                out << indent << "} else {\n";
                render_slice_stmts(out, iff->else_body, m, depth + 1);
            }
            out << indent << "}\n";
            continue;
        }
        if (auto* blk = std::get_if<BlockStmt>(&s.node)) {
            if (!any_tagged(blk->body, m)) continue;
            out << indent << blk->header << " {\n";
            render_slice_stmts(out, blk->body, m, depth + 1);
            out << indent << "}\n";
            continue;
        }
        if (!m.stmt_tagged(s.id)) continue;
        out << indent << "< " << tag_text(m, s.id) << " > "
            << render_stmt_inline(s) << " < / >\n";
    }
}

std::string signature_with_tags(const MethodDecl& method, const Markup& m) {
    std::string out =
        method.visibility == Visibility::Private ? "private " : "def ";
    out += method.name + "(";
    for (size_t i = 0; i < method.params.size(); ++i) {
        if (i) out += ", ";
        ParamKey key{method.id, static_cast<int>(i)};
        auto it = m.param_forwards.find(key);
        if (it != m.param_forwards.end()) {
            std::string targets;
            for (int line : it->second) targets += std::to_string(line) + " ";
            if (!targets.empty()) targets.pop_back();
            out += " < " + targets + " > " + method.params[i] + " < / > ";
        } else {
            out += method.params[i];
        }
    }
    return out + ")";
}

}  // namespace

std::string render_slice_body(const Program& p, const Markup& m) {
    struct Item {
        int line;
        std::string text;
    };
    std::vector<Item> items;

    if (!p.top_statements.empty()) {
        std::ostringstream top;
        render_slice_stmts(top, p.top_statements, m, 0);
        if (!top.str().empty())
            items.push_back({p.top_statements.front().line, top.str()});
    }
    for (const auto& method : p.methods) {
        bool param_tagged = false;
        for (size_t i = 0; i < method.params.size(); ++i)
            if (m.param_forwards.count(ParamKey{method.id, static_cast<int>(i)}))
                param_tagged = true;
        if (!param_tagged && !any_tagged(method.body, m)) continue;
        std::ostringstream body;
        body << signature_with_tags(method, m) << " {\n";
        render_slice_stmts(body, method.body, m, 1);
        body << "}\n";
        items.push_back({method.line, body.str()});
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.line < b.line; });

    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += "\n";
        out += items[i].text;
    }
    return out;
}

std::string render_summary(const FlowReport& r) {
    if (r.flows.empty()) return "benign\n";
    std::string out;
    for (const auto& flow : r.flows) {
        std::string line;
        for (int l : flow.chain) line += std::to_string(l) + " ";
        if (!line.empty()) line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string render_slice(const Program& p, const Markup& m, const FlowReport& r) {
    std::string body = render_slice_body(p, m);
    std::string out = render_summary(r);
    if (!body.empty()) out += "\n" + body;
    return out;
}

}  // namespace smartslice
