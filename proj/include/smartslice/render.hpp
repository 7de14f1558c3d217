#pragma once

#include <string>

#include "smartslice/ast.hpp"

namespace smartslice {

/// Renders a Program back to source text. Every statement lands on its
/// recorded line; lines that lost their statement (removed branches,
/// comments) come out blank so the surviving code keeps its numbering.
std::string render(const Program& p);

/// Single-line renderings used by both render() and the slice report.
std::string render_expr(const Expr& e);
std::string render_stmt_inline(const Stmt& s);
std::string method_signature(const MethodDecl& m);

}  // namespace smartslice
