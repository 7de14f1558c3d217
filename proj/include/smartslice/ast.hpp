#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace smartslice {

struct Expr;
struct Stmt;
struct Arg;

/// A `$name` or `${...}` reference embedded in a double-quoted string.
struct InterpSlot {
    std::string ident;                 // base identifier, e.g. evt
    std::vector<std::string> members;  // property chain, e.g. displayName
    bool braced = false;
};

/// Double-quoted strings keep their raw segments so interpolation slots can
/// be renamed and the literal re-rendered without loss.
struct StringLit {
    char quote = '"';
    std::vector<std::string> segments;  // slots.size() + 1 raw pieces
    std::vector<InterpSlot> slots;

    bool interpolated() const { return !slots.empty(); }
    std::string text() const;  // rebuilt literal body without quotes
};

struct Identifier {
    std::string name;
};

struct NumberLit {
    std::string text;
};

struct KeywordLit {
    std::string text;  // true / false / null
};

struct ListLit {
    std::vector<Expr> elems;
};

struct Closure {
    std::vector<Stmt> body;  // implicit `it` parameter
};

/// name(args), receiver.name(args), receiver.name{ closure }, name arg, ...
struct Call {
    std::vector<Expr> receiver;  // empty or one element
    std::string name;
    std::vector<Arg> args;
    std::vector<Closure> trailing;  // empty or one element
};

/// base.member without a call, e.g. state.firstCounter, evt.displayName.
struct Property {
    std::vector<Expr> base;  // exactly one element
    std::string member;
};

struct Binary {
    std::string op;
    std::vector<Expr> operands;  // exactly two elements
};

struct Unary {
    std::string op;
    std::vector<Expr> operands;  // exactly one element
};

/// Call through a string-valued name: bare `$methodName` or `"$m"(...)`.
struct ReflectiveCall {
    std::vector<InterpSlot> name_slots;  // identifiers the name may read
    std::vector<Arg> args;
    bool bare = false;  // `$methodName` statement form
};

struct Expr {
    int line = 0;
    std::variant<Identifier, StringLit, NumberLit, KeywordLit, ListLit, Call,
                 Property, Binary, Unary, ReflectiveCall>
        node;
};

struct Arg {
    std::optional<std::string> name;  // named argument key, e.g. title:
    Expr value;
};

/// Assignment target: a plain variable or a property like state.counter.
struct AssignTarget {
    std::string base;
    std::vector<std::string> members;

    bool is_property() const { return !members.empty(); }
    std::string display() const;
};

struct Assignment {
    bool declares = false;  // `def` prefix
    AssignTarget target;
    Expr value;
};

struct ExprStmt {
    Expr expr;
};

struct IfStmt {
    Expr condition;
    std::vector<Stmt> then_body;
    std::vector<Stmt> else_body;
    bool has_else = false;
    int then_end_line = 0;  // line closing the then branch
    int else_line = 0;      // line of the `else` keyword
    int end_line = 0;       // line closing the whole statement
};

struct ReturnStmt {
    std::vector<Expr> value;  // empty or one element
};

/// subscribe(device, "event", handler)
struct SubscribeStmt {
    std::string device;
    StringLit event;
    std::string handler;
    bool resolved = false;  // handler names a method in the same program
};

/// Conservative container for loops / switch / try: taint propagates into
/// and around it, path generation never splits it.
struct BlockStmt {
    std::string header;  // e.g. "while (x < 3)"
    std::vector<Stmt> body;
    int end_line = 0;
};

struct Stmt {
    int id = 0;
    int line = 0;
    std::variant<Assignment, ExprStmt, IfStmt, ReturnStmt, SubscribeStmt,
                 BlockStmt>
        node;
};

struct InputDecl {
    int line = 0;
    std::string name;        // declared identifier, e.g. themotion
    std::string capability;  // e.g. capability.motionSensor
    std::vector<Arg> options;
};

struct Section {
    int line = 0;
    int end_line = 0;
    std::string title;
    std::vector<InputDecl> inputs;
};

struct Preferences {
    int line = 0;
    int end_line = 0;
    std::vector<Section> sections;
};

/// The definition(...) metadata block is replayed verbatim when rendering.
struct DefinitionBlock {
    int line = 0;
    int end_line = 0;
    std::vector<std::string> raw_lines;
};

enum class Visibility { Default, Private };

struct MethodDecl {
    int id = 0;
    int line = 0;
    int end_line = 0;
    std::string name;
    std::vector<std::string> params;
    std::vector<Stmt> body;
    Visibility visibility = Visibility::Default;
};

struct Program {
    std::optional<DefinitionBlock> definition;
    std::optional<Preferences> preferences;
    std::vector<MethodDecl> methods;
    std::vector<Stmt> top_statements;
    int line_count = 0;
    int next_id = 1;  // next free node id for transforms that add nodes
    std::string source_name;

    const MethodDecl* find_method(const std::string& name) const;
    int fresh_id() { return next_id++; }
};

/// Structural equality: same shape, names, literals and line numbers.
bool equals(const Expr& a, const Expr& b);
bool equals(const Stmt& a, const Stmt& b);
bool equals(const Program& a, const Program& b);

/// Visit every statement in the program, including statements nested in
/// if bodies, generic blocks and closures. Order is document order.
void for_each_stmt(const Program& p, const std::function<void(const Stmt&)>& fn);
void for_each_stmt(Program& p, const std::function<void(Stmt&)>& fn);
void for_each_stmt(const std::vector<Stmt>& body,
                   const std::function<void(const Stmt&)>& fn);

}  // namespace smartslice
