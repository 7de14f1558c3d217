#pragma once

#include <map>
#include <string>
#include <vector>

#include "smartslice/ast.hpp"

namespace smartslice {

struct CloneInfo {
    std::string clone_name;
    std::string original_name;
    int original_line = 0;  // declaration line of the cloned method
    int clone_line = 0;     // declaration line of the appended clone
};

struct CloneResult {
    Program program;
    std::vector<CloneInfo> clones;
    std::vector<std::string> warnings;  // skipped recursive methods, depth cap

    /// clone declaration line -> original declaration line, for mapping
    /// reported flows back to the source the auditor is reading.
    std::map<int, int> origin_lines() const;
};

/// Gives every call site of a user-defined method its own uniquely named
/// clone of the callee, appended at the end of the file. Recursive methods
/// (direct or mutual) are skipped with a warning; reflective calls are
/// never cloned. Nested user-method calls inside clones are re-cloned up
/// to max_depth levels.
CloneResult clone_methods(const Program& p, int max_depth = 8);

}  // namespace smartslice
