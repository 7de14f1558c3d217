#include <doctest.h>

#include <fstream>
#include <sstream>

#include "smartslice/errors.hpp"
#include "smartslice/parser.hpp"

using namespace smartslice;

namespace {
std::string fixture(const std::string& rel) {
    return std::string(SMARTSLICE_FIXTURES) + "/" + rel;
}
Program parse_fixture(const std::string& rel) {
    return parse_source(SourceFile::load(fixture(rel)));
}
}  // namespace

TEST_CASE("empty file parses to an empty program") {
    Program p = parse_text("");
    CHECK(p.methods.empty());
    CHECK(p.top_statements.empty());
    CHECK_FALSE(p.definition.has_value());
    CHECK_FALSE(p.preferences.has_value());
}

TEST_CASE("path listing parses to one method with if-else and sink call") {
    Program p = parse_fixture("listings/path_listing.groovy");
    REQUIRE(p.methods.size() == 1);
    CHECK(p.methods[0].name == "test");
    REQUIRE(p.methods[0].body.size() == 2);
    auto* iff = std::get_if<IfStmt>(&p.methods[0].body[0].node);
    REQUIRE(iff != nullptr);
    CHECK(iff->has_else);
    CHECK(iff->then_body.size() == 1);
    CHECK(iff->else_body.size() == 1);
    auto* sink = std::get_if<ExprStmt>(&p.methods[0].body[1].node);
    REQUIRE(sink != nullptr);
    CHECK(p.methods[0].body[1].line == 8);
}

TEST_CASE("appendix app parses with preferences, methods and resolved subscribe") {
    Program p = parse_fixture("listings/unlock_arrive.groovy");
    REQUIRE(p.preferences.has_value());
    CHECK(p.preferences->sections.size() == 2);
    int inputs = 0;
    for (const auto& s : p.preferences->sections) inputs += (int)s.inputs.size();
    CHECK(inputs == 2);
    CHECK(p.methods.size() == 3);
    int subscribes = 0;
    for_each_stmt(p, [&](const Stmt& s) {
        if (auto* sub = std::get_if<SubscribeStmt>(&s.node)) {
            ++subscribes;
            CHECK(sub->handler == "presence");
            CHECK(sub->resolved);
        }
    });
    CHECK(subscribes == 2);
}

TEST_CASE("node lines are non-decreasing in document order") {
    Program p = parse_fixture("listings/unlock_arrive.groovy");
    int last = 0;
    for (const auto& m : p.methods) {
        CHECK(m.line >= last);
        last = m.line;
        int inner = m.line;
        for (const auto& s : m.body) {
            CHECK(s.line >= inner);
            inner = s.line;
        }
    }
}

TEST_CASE("statement lines match the source") {
    Program p = parse_fixture("listings/motion.groovy");
    const MethodDecl* init = p.find_method("initialize");
    REQUIRE(init != nullptr);
    CHECK(init->line == 32);
    REQUIRE(init->body.size() == 1);
    CHECK(init->body[0].line == 33);
    const MethodDecl* handler = p.find_method("motionDetectedHandler");
    REQUIRE(handler != nullptr);
    CHECK(handler->line == 36);
    REQUIRE(handler->body.size() == 3);
    CHECK(handler->body[0].line == 37);
    CHECK(handler->body[1].line == 38);
    CHECK(handler->body[2].line == 39);
}

TEST_CASE("semicolons are optional and harmless") {
    Program a = parse_text("def x = 1\nsendSms(x)\n");
    Program b = parse_text("def x = 1;\nsendSms(x);\n");
    CHECK(equals(a, b));
}

TEST_CASE("malformed input raises ParseError with line") {
    try {
        parse_text("def f( {\n}\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line >= 1);
    }
}

TEST_CASE("duplicate input names are rejected") {
    std::string text =
        "preferences {\n"
        "    section(\"a\") {\n"
        "        input \"dev\", \"capability.switch\"\n"
        "        input \"dev\", \"capability.lock\"\n"
        "    }\n"
        "}\n";
    CHECK_THROWS_AS(parse_text(text), ParseError);
}

TEST_CASE("loops and switch parse into generic blocks") {
    std::string text =
        "def f() {\n"
        "    while (x < 3) {\n"
        "        y = y + 1\n"
        "    }\n"
        "}\n";
    Program p = parse_text(text);
    REQUIRE(p.methods.size() == 1);
    auto* blk = std::get_if<BlockStmt>(&p.methods[0].body[0].node);
    REQUIRE(blk != nullptr);
    CHECK(blk->body.size() == 1);
}

TEST_CASE("command-style call takes arguments without parens") {
    Program p = parse_text("def f(evt) {\n    sendPush \"hi $evt\"\n}\n");
    auto* stmt = std::get_if<ExprStmt>(&p.methods[0].body[0].node);
    REQUIRE(stmt != nullptr);
    auto* call = std::get_if<Call>(&stmt->expr.node);
    REQUIRE(call != nullptr);
    CHECK(call->name == "sendPush");
    REQUIRE(call->args.size() == 1);
}

TEST_CASE("closure with it parses inside an expression") {
    Program p = parse_text(
        "def f() {\n"
        "    def anyLocked = lock1.count{it.currentLock == \"unlocked\"} != lock1.size()\n"
        "}\n");
    auto* assign = std::get_if<Assignment>(&p.methods[0].body[0].node);
    REQUIRE(assign != nullptr);
    auto* bin = std::get_if<Binary>(&assign->value.node);
    REQUIRE(bin != nullptr);
    CHECK(bin->op == "!=");
}

TEST_CASE("reflective call forms parse") {
    Program p = parse_text(
        "def callByReflection() {\n"
        "    def methodName = \"foo\"\n"
        "    $methodName\n"
        "    def got = \"$methodName\"()\n"
        "}\n");
    auto* bare = std::get_if<ExprStmt>(&p.methods[0].body[1].node);
    REQUIRE(bare != nullptr);
    CHECK(std::holds_alternative<ReflectiveCall>(bare->expr.node));
    auto* assign = std::get_if<Assignment>(&p.methods[0].body[2].node);
    REQUIRE(assign != nullptr);
    CHECK(std::holds_alternative<ReflectiveCall>(assign->value.node));
}

TEST_CASE("else-if chain nests as if inside else") {
    std::string text =
        "def f() {\n"
        "    if (a) {\n"
        "        x = 1\n"
        "    } else if (b) {\n"
        "        x = 2\n"
        "    } else {\n"
        "        x = 3\n"
        "    }\n"
        "}\n";
    Program p = parse_text(text);
    auto* outer = std::get_if<IfStmt>(&p.methods[0].body[0].node);
    REQUIRE(outer != nullptr);
    REQUIRE(outer->else_body.size() == 1);
    auto* inner = std::get_if<IfStmt>(&outer->else_body[0].node);
    REQUIRE(inner != nullptr);
    CHECK(inner->has_else);
}
