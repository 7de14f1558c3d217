#pragma once

#include <string>
#include <vector>

#include "smartslice/ast.hpp"
#include "smartslice/catalog.hpp"

namespace smartslice {

enum class PathMode { WholeProgram, PerMethod, FlowAffecting };

std::string to_string(PathMode mode);

struct PathConfig {
    PathMode mode = PathMode::FlowAffecting;
    int cap = 12;  // bounds resolved if-statements, not the path count
};

/// One execution-path variant: a T/F decision string plus the if-free,
/// line-preserving program it denotes.
struct PathVariant {
    std::string id;
    Program program;
};

/// Resolves one if-statement to its true branch: the body is inlined in
/// place, the condition and else branch become blank lines, every other
/// line keeps its number. Throws UnknownIf if the id names no if.
Program true_path(const Program& p, int if_stmt_id);

/// Dual of true_path: the else branch (if any) is inlined, the then branch
/// becomes blank lines.
Program false_path(const Program& p, int if_stmt_id);

/// Recursively generates T/F variants until no targeted if-statement is
/// left. whole_program targets every if; per_method resolves one if per
/// method at a time so the variant count follows the busiest method;
/// flow_affecting first runs the insensitive analysis and only targets
/// if-statements containing marked statements. Throws CapExceeded when the
/// targeted if count passes cfg.cap.
std::vector<PathVariant> enumerate_paths(const Program& p, const PathConfig& cfg,
                                         const Catalog& cat);

struct IfStats {
    int total_ifs = 0;
    int max_ifs_per_method = 0;
    int flow_affecting_ifs = 0;
};

IfStats if_stats(const Program& p, const Catalog& cat);

}  // namespace smartslice
