#include <doctest.h>

#include "smartslice/analysis.hpp"
#include "smartslice/errors.hpp"
#include "smartslice/parser.hpp"
#include "smartslice/render.hpp"
#include "smartslice/ssa.hpp"

using namespace smartslice;

namespace {

std::string fixture(const std::string& rel) {
    return std::string(SMARTSLICE_FIXTURES) + "/" + rel;
}

Program load(const std::string& rel) {
    return parse_source(SourceFile::load(fixture(rel)));
}

/// Counts assignments per target name; single-assignment means every
/// count is one.
bool single_assignment_scan(const Program& p) {
    std::map<std::string, int> counts;
    bool ok = true;
    for_each_stmt(p, [&](const Stmt& s) {
        if (auto* a = std::get_if<Assignment>(&s.node)) {
            if (a->target.is_property()) return;
            if (++counts[a->target.base] > 1) ok = false;
        }
    });
    return ok;
}

}  // namespace

TEST_CASE("reassignment example renames to the message1/message2 shape") {
    Program p = load("listings/flow_sens.groovy");
    Program ssa = to_ssa(p);
    REQUIRE(ssa.top_statements.size() == 4);

    auto* first = std::get_if<Assignment>(&ssa.top_statements[0].node);
    REQUIRE(first != nullptr);
    CHECK(first->target.base == "message1");
    CHECK(first->declares);

    auto* push = std::get_if<ExprStmt>(&ssa.top_statements[1].node);
    REQUIRE(push != nullptr);
    auto* push_call = std::get_if<Call>(&push->expr.node);
    REQUIRE(push_call != nullptr);
    CHECK(render_expr(push_call->args[0].value) == "message1");

    auto* second = std::get_if<Assignment>(&ssa.top_statements[2].node);
    REQUIRE(second != nullptr);
    CHECK(second->target.base == "message2");
    CHECK_FALSE(second->declares);

    auto* sms = std::get_if<ExprStmt>(&ssa.top_statements[3].node);
    REQUIRE(sms != nullptr);
    auto* sms_call = std::get_if<Call>(&sms->expr.node);
    REQUIRE(sms_call != nullptr);
    CHECK(render_expr(sms_call->args[0].value) == "message2");
}

TEST_CASE("line numbers survive the transform") {
    Program p = load("listings/flow_sens.groovy");
    Program ssa = to_ssa(p);
    for (size_t i = 0; i < ssa.top_statements.size(); ++i)
        CHECK(ssa.top_statements[i].line == p.top_statements[i].line);
}

TEST_CASE("a single-assignment program passes through untouched") {
    Program p = parse_text("def x = 1\nsendSms(x)\n");
    Program ssa = to_ssa(p);
    CHECK(equals(p, ssa));
}

TEST_CASE("to_ssa is idempotent") {
    for (const char* rel :
         {"listings/flow_sens.groovy", "listings/motion.groovy",
          "listings/context_eval.groovy"}) {
        CAPTURE(rel);
        Program once = to_ssa(load(rel));
        Program twice = to_ssa(once);
        CHECK(equals(once, twice));
    }
}

TEST_CASE("output is in single-assignment form") {
    Program ssa = to_ssa(load("listings/flow_sens.groovy"));
    CHECK(single_assignment_scan(ssa));
}

TEST_CASE("same local name in two methods gets independent counters") {
    std::string text =
        "def f() {\n"
        "    def x = 1\n"
        "    def y = x\n"
        "    y = 2\n"
        "}\n"
        "\n"
        "def g() {\n"
        "    def x = 3\n"
        "    def y = x\n"
        "    y = 4\n"
        "}\n";
    Program ssa = to_ssa(parse_text(text));
    // Def-use walk per method: the version sets must not overlap, or the
    // second version (which loses its def flag) would conflate globally.
    std::set<std::string> f_names, g_names;
    for_each_stmt(ssa.methods[0].body, [&](const Stmt& s) {
        if (auto* a = std::get_if<Assignment>(&s.node))
            f_names.insert(a->target.base);
    });
    for_each_stmt(ssa.methods[1].body, [&](const Stmt& s) {
        if (auto* a = std::get_if<Assignment>(&s.node))
            g_names.insert(a->target.base);
    });
    CHECK(f_names.size() == 3);
    CHECK(g_names.size() == 3);
    for (const auto& name : f_names) CHECK(g_names.count(name) == 0);
}

TEST_CASE("def locals shadow globals") {
    std::string text =
        "x = \"global\"\n"
        "def f() {\n"
        "    def x = \"local\"\n"
        "    x = \"again\"\n"
        "    sendSms(x)\n"
        "}\n"
        "sendPush(x)\n";
    Program ssa = to_ssa(parse_text(text));
    // The global stream sees exactly one assignment; the local two.
    auto* global = std::get_if<Assignment>(&ssa.top_statements[0].node);
    REQUIRE(global != nullptr);
    CHECK(global->target.base == "x1");
    auto* local2 = std::get_if<Assignment>(&ssa.methods[0].body[1].node);
    REQUIRE(local2 != nullptr);
    CHECK(local2->target.base == "x3");
    auto* use = std::get_if<ExprStmt>(&ssa.methods[0].body[2].node);
    auto* call = std::get_if<Call>(&use->expr.node);
    CHECK(render_expr(call->args[0].value) == "x3");
    auto* top_use = std::get_if<ExprStmt>(&ssa.top_statements.back().node);
    auto* top_call = std::get_if<Call>(&top_use->expr.node);
    CHECK(render_expr(top_call->args[0].value) == "x1");
}

TEST_CASE("method parameters stay version zero") {
    std::string text =
        "def f(message) {\n"
        "    sendSms(message)\n"
        "}\n";
    Program p = parse_text(text);
    Program ssa = to_ssa(p);
    CHECK(equals(p, ssa));
}

TEST_CASE("state properties are never renamed") {
    std::string text =
        "state.counter = 1\n"
        "state.counter = 2\n"
        "def x = state.counter\n"
        "def y = 1\n"
        "y = 2\n";
    Program ssa = to_ssa(parse_text(text));
    auto* s1 = std::get_if<Assignment>(&ssa.top_statements[0].node);
    auto* s2 = std::get_if<Assignment>(&ssa.top_statements[1].node);
    CHECK(s1->target.display() == "state.counter");
    CHECK(s2->target.display() == "state.counter");
    auto* x = std::get_if<Assignment>(&ssa.top_statements[2].node);
    CHECK(render_expr(x->value) == "state.counter");
}

TEST_CASE("use of a local before its assignment is an error") {
    std::string text =
        "def f() {\n"
        "    sendSms(x)\n"
        "    def x = \"late\"\n"
        "    x = \"again\"\n"
        "}\n";
    CHECK_THROWS_AS(to_ssa(parse_text(text)), SsaError);
}

TEST_CASE("interpolation slots rename with their variable") {
    std::string text =
        "def m = \"a\"\n"
        "m = \"b\"\n"
        "def out = \"value: $m\"\n"
        "out = \"other\"\n"
        "sendSms(out)\n";
    Program ssa = to_ssa(parse_text(text));
    auto* out_assign = std::get_if<Assignment>(&ssa.top_statements[2].node);
    REQUIRE(out_assign != nullptr);
    auto* lit = std::get_if<StringLit>(&out_assign->value.node);
    REQUIRE(lit != nullptr);
    REQUIRE(lit->slots.size() == 1);
    CHECK(lit->slots[0].ident == "m2");
}

TEST_CASE("fresh names skip identifiers that already exist") {
    std::string text =
        "def message1 = \"taken\"\n"
        "def message = \"a\"\n"
        "message = \"b\"\n"
        "sendSms(message)\n";
    Program ssa = to_ssa(parse_text(text));
    auto* second = std::get_if<Assignment>(&ssa.top_statements[1].node);
    REQUIRE(second != nullptr);
    // message1 is taken by the source, so the counter skips past it.
    CHECK(second->target.base == "message2");
    auto* third = std::get_if<Assignment>(&ssa.top_statements[2].node);
    CHECK(third->target.base == "message3");
}

TEST_CASE("branches rename with forked maps and no phi") {
    std::string text =
        "def f(c) {\n"
        "    def x = \"start\"\n"
        "    if (c) {\n"
        "        x = \"then\"\n"
        "    } else {\n"
        "        x = \"else\"\n"
        "    }\n"
        "    sendSms(x)\n"
        "}\n";
    Program ssa = to_ssa(parse_text(text));
    CHECK(single_assignment_scan(ssa));
    auto* iff = std::get_if<IfStmt>(&ssa.methods[0].body[1].node);
    REQUIRE(iff != nullptr);
    auto* then_assign = std::get_if<Assignment>(&iff->then_body[0].node);
    auto* else_assign = std::get_if<Assignment>(&iff->else_body[0].node);
    CHECK(then_assign->target.base != else_assign->target.base);
}

TEST_CASE("pipeline effect: ssa removes the reassignment false positive") {
    Catalog cat = load_catalog("sources:\nsensitiveData\n");
    Program p = load("listings/flow_sens.groovy");

    FlowReport core = analyze_program(p, cat);
    std::set<std::string> core_sinks;
    for (const auto& f : core.flows) core_sinks.insert(f.sink_name);
    CHECK(core_sinks == std::set<std::string>{"sendPush", "sendSms"});

    FlowReport flow_sensitive = analyze_program(to_ssa(p), cat);
    std::set<std::string> ssa_sinks;
    for (const auto& f : flow_sensitive.flows) ssa_sinks.insert(f.sink_name);
    CHECK(ssa_sinks == std::set<std::string>{"sendPush"});
}
