// Test-only concrete interpreter for branch-free fixtures. Evaluates
// assignments, interpolated strings and user-method calls, and records the
// argument values reaching catalog sinks. Used to check that transforms
// preserve behavior; intentionally independent of the analysis code.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "smartslice/ast.hpp"
#include "smartslice/catalog.hpp"

namespace smartslice::testing {

struct SinkEvent {
    std::string sink;
    std::vector<std::string> args;
    bool operator==(const SinkEvent& o) const {
        return sink == o.sink && args == o.args;
    }
};

class Interpreter {
  public:
    Interpreter(const Program& p, const Catalog& cat) : program_(p), cat_(cat) {}

    std::vector<SinkEvent> run() {
        std::map<std::string, std::string> globals;
        for (const auto& s : program_.top_statements) exec(s, globals, nullptr);
        // Entry methods in document order, zero-argument only.
        for (const auto& m : program_.methods) {
            if (!m.params.empty()) continue;
            std::map<std::string, std::string> locals;
            exec_body(m.body, locals, &globals);
        }
        return events_;
    }

    std::vector<SinkEvent> run_method(const std::string& name,
                                      const std::vector<std::string>& args) {
        std::map<std::string, std::string> globals;
        const MethodDecl* m = program_.find_method(name);
        if (m) call_method(*m, args, globals);
        return events_;
    }

  private:
    using Env = std::map<std::string, std::string>;

    std::string call_method(const MethodDecl& m, const std::vector<std::string>& args,
                            Env& globals) {
        Env locals;
        for (size_t i = 0; i < m.params.size() && i < args.size(); ++i)
            locals[m.params[i]] = args[i];
        return exec_body(m.body, locals, &globals);
    }

    std::string exec_body(const std::vector<Stmt>& body, Env& locals, Env* globals) {
        for (const auto& s : body) {
            if (auto* ret = std::get_if<ReturnStmt>(&s.node))
                return ret->value.empty() ? ""
                                          : eval(ret->value[0], locals, globals);
            exec(s, locals, globals);
        }
        return "";
    }

    void exec(const Stmt& s, Env& env, Env* globals) {
        if (auto* a = std::get_if<Assignment>(&s.node)) {
            std::string value = eval(a->value, env, globals);
            env[a->target.display()] = value;
            return;
        }
        if (auto* e = std::get_if<ExprStmt>(&s.node)) {
            eval(e->expr, env, globals);
            return;
        }
    }

    std::string lookup(const std::string& name, const Env& env, Env* globals) {
        if (auto it = env.find(name); it != env.end()) return it->second;
        if (globals)
            if (auto it = globals->find(name); it != globals->end())
                return it->second;
        return "<" + name + ">";
    }

    std::string eval(const Expr& e, Env& env, Env* globals) {
        return std::visit(
            [&](const auto& node) -> std::string {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Identifier>) {
                    return lookup(node.name, env, globals);
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    std::string out = node.segments[0];
                    for (size_t i = 0; i < node.slots.size(); ++i) {
                        std::string slot_name = node.slots[i].ident;
                        for (const auto& m : node.slots[i].members)
                            slot_name += "." + m;
                        out += lookup(slot_name, env, globals);
                        if (slot_name != node.slots[i].ident &&
                            out.ends_with("<" + slot_name + ">")) {
                            // property of a bound base keeps the binding visible
                            out.resize(out.size() - slot_name.size() - 2);
                            out += lookup(node.slots[i].ident, env, globals) + "." +
                                   slot_name.substr(node.slots[i].ident.size() + 1);
                        }
                        if (i + 1 < node.segments.size()) out += node.segments[i + 1];
                    }
                    return out;
                } else if constexpr (std::is_same_v<T, NumberLit> ||
                                     std::is_same_v<T, KeywordLit>) {
                    return node.text;
                } else if constexpr (std::is_same_v<T, Call>) {
                    std::vector<std::string> args;
                    for (const auto& a : node.args)
                        args.push_back(eval(a.value, env, globals));
                    if (node.receiver.empty()) {
                        if (cat_.is_sink(node.name)) {
                            events_.push_back({node.name, args});
                            return "";
                        }
                        if (const MethodDecl* m = program_.find_method(node.name)) {
                            Env dummy;
                            return call_method(*m, args, globals ? *globals : dummy);
                        }
                    }
                    std::string out = "<call:" + node.name;
                    for (const auto& a : args) out += ":" + a;
                    return out + ">";
                } else if constexpr (std::is_same_v<T, Property>) {
                    return eval(node.base[0], env, globals) + "." + node.member;
                } else if constexpr (std::is_same_v<T, Binary>) {
                    return eval(node.operands[0], env, globals) + node.op +
                           eval(node.operands[1], env, globals);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    return node.op + eval(node.operands[0], env, globals);
                } else {
                    return "<expr>";
                }
            },
            e.node);
    }

    const Program& program_;
    const Catalog& cat_;
    std::vector<SinkEvent> events_;
};

inline std::vector<SinkEvent> sink_trace(const Program& p, const Catalog& cat) {
    return Interpreter(p, cat).run();
}

}  // namespace smartslice::testing
