#pragma once

#include "smartslice/ast.hpp"

namespace smartslice {

/// Rewrites the program so each variable is assigned exactly once, giving
/// the analysis flow sensitivity. Every assignment target V becomes V<k>
/// using a per-scope counter C(V); uses between assignment k and k+1 are
/// renamed to V<k>. `def` locals take precedence over globals, method
/// parameters are version zero of their name, `state.*` is never renamed
/// and line numbers are unchanged. A program already in single-assignment
/// form comes back untouched, which makes the transform idempotent.
Program to_ssa(const Program& p);

}  // namespace smartslice
