#include <doctest.h>

#include "interp.hpp"
#include "smartslice/analysis.hpp"
#include "smartslice/clone.hpp"
#include "smartslice/parser.hpp"
#include "smartslice/render.hpp"

using namespace smartslice;

namespace {

std::string fixture(const std::string& rel) {
    return std::string(SMARTSLICE_FIXTURES) + "/" + rel;
}

Program load(const std::string& rel) {
    return parse_source(SourceFile::load(fixture(rel)));
}

Catalog sensitive_catalog() { return load_catalog("sources:\nsensitiveData\n"); }

int call_count(const Program& p, const std::string& callee) {
    int n = 0;
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Call>) {
                    if (node.receiver.empty() && node.name == callee) ++n;
                    for (const auto& r : node.receiver) walk(r);
                    for (const auto& a : node.args) walk(a.value);
                } else if constexpr (std::is_same_v<T, Binary> ||
                                     std::is_same_v<T, Unary>) {
                    for (const auto& o : node.operands) walk(o);
                } else if constexpr (std::is_same_v<T, ListLit>) {
                    for (const auto& el : node.elems) walk(el);
                } else if constexpr (std::is_same_v<T, Property>) {
                    walk(node.base[0]);
                }
            },
            e.node);
    };
    for_each_stmt(p, [&](const Stmt& s) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Assignment>) {
                    walk(node.value);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    walk(node.expr);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    for (const auto& e : node.value) walk(e);
                }
            },
            s.node);
    });
    return n;
}

}  // namespace

TEST_CASE("cloning gives every call site its own method") {
    Program p = load("listings/context_clone_input.groovy");
    CloneResult result = clone_methods(p);
    const Program& out = result.program;

    // Original kept, two clones appended, in call-site order.
    REQUIRE(out.methods.size() == 4);
    CHECK(out.methods[0].name == "takeAction");
    CHECK(out.methods[1].name == "returnMessage");
    CHECK(out.methods[2].name == "returnMessage1");
    CHECK(out.methods[3].name == "returnMessage2");
    CHECK(out.methods[2].visibility == Visibility::Private);

    // Calls renamed site by site; the shared name is gone from call sites.
    CHECK(call_count(out, "returnMessage") == 0);
    CHECK(call_count(out, "returnMessage1") == 1);
    CHECK(call_count(out, "returnMessage2") == 1);

    REQUIRE(result.clones.size() == 2);
    CHECK(result.clones[0].clone_name == "returnMessage1");
    CHECK(result.clones[0].original_line == 9);
    CHECK(result.clones[0].clone_line > p.line_count);
    CHECK(result.origin_lines().at(result.clones[0].clone_line) == 9);
    CHECK(result.warnings.empty());

    // The output is still parseable source.
    Program reparsed = parse_text(render(out));
    CHECK(reparsed.methods.size() == 4);
}

TEST_CASE("program with zero user-method calls is unchanged") {
    Program p = parse_text("def f() {\n    sendSms(\"x\")\n}\n");
    CloneResult result = clone_methods(p);
    CHECK(equals(p, result.program));
    CHECK(result.clones.empty());
    CHECK(result.warnings.empty());
}

TEST_CASE("self-recursive call site stays intact with a warning") {
    Program p = parse_text("def f() {\n    f()\n}\n");
    CloneResult result = clone_methods(p);
    CHECK(equals(p, result.program));
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("recursive") != std::string::npos);
    CHECK(result.warnings[0].find("'f'") != std::string::npos);
}

TEST_CASE("mutually recursive methods are skipped") {
    std::string text =
        "def f() {\n    g()\n}\n"
        "def g() {\n    f()\n}\n";
    Program p = parse_text(text);
    CloneResult result = clone_methods(p);
    CHECK(equals(p, result.program));
    CHECK(result.warnings.size() == 2);
}

TEST_CASE("every user-defined callee ends with at most one call site") {
    Program p = load("listings/context_eval.groovy");
    CloneResult result = clone_methods(p);
    std::map<std::string, int> sites;
    for (const auto& m : result.program.methods)
        sites[m.name] = call_count(result.program, m.name);
    for (const auto& [name, n] : sites) {
        CAPTURE(name);
        CHECK(n <= 1);
    }
}

TEST_CASE("nested calls inside clones are re-cloned") {
    std::string text =
        "def outer(x) {\n"
        "    return inner(x)\n"
        "}\n"
        "def inner(x) {\n"
        "    return x\n"
        "}\n"
        "def run() {\n"
        "    def a = outer(\"one\")\n"
        "    def b = outer(\"two\")\n"
        "    sendSms(a)\n"
        "}\n";
    Program p = parse_text(text);
    CloneResult result = clone_methods(p);
    // outer1, outer2 plus one inner clone per outer clone (and the direct
    // call inside the original outer).
    std::set<std::string> names;
    for (const auto& m : result.program.methods) names.insert(m.name);
    CHECK(names.count("outer1"));
    CHECK(names.count("outer2"));
    CHECK(call_count(result.program, "inner") == 0);
    for (const auto& m : result.program.methods) {
        CAPTURE(m.name);
        CHECK(call_count(result.program, m.name) <= 1);
    }
}

TEST_CASE("clone depth cap leaves deeper calls with a warning") {
    std::string text =
        "def a(x) {\n    return b(x)\n}\n"
        "def b(x) {\n    return x\n}\n"
        "def run() {\n    sendSms(a(\"v\"))\n}\n";
    Program p = parse_text(text);
    CloneResult result = clone_methods(p, 1);
    bool warned = false;
    for (const auto& w : result.warnings)
        if (w.find("depth") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("behavior is preserved on branch-free fixtures") {
    Catalog cat = sensitive_catalog();
    for (const char* rel :
         {"listings/context_clone_input.groovy", "listings/context_eval.groovy"}) {
        CAPTURE(rel);
        Program p = load(rel);
        CloneResult result = clone_methods(p);
        auto before = testing::sink_trace(p, cat);
        auto after = testing::sink_trace(result.program, cat);
        CHECK(before == after);
    }
}

TEST_CASE("pipeline effect: cloning removes the conflation false positive") {
    Catalog cat = sensitive_catalog();
    Program p = load("listings/context_eval.groovy");
    FlowReport conflated = analyze_program(p, cat);
    CHECK(conflated.leaking);
    CloneResult result = clone_methods(p);
    FlowReport precise = analyze_program(result.program, cat);
    CHECK_FALSE(precise.leaking);
    CHECK(precise.flows.empty());
}
