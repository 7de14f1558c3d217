#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smartslice/ast.hpp"
#include "smartslice/catalog.hpp"

namespace smartslice {

/// A tagged method parameter: the channel between a call site (or
/// subscribe registration) and uses of the parameter inside the method.
struct ParamKey {
    int method_id = 0;
    int param_index = 0;
    bool operator<(const ParamKey& o) const {
        return method_id != o.method_id ? method_id < o.method_id
                                        : param_index < o.param_index;
    }
    bool operator==(const ParamKey& o) const {
        return method_id == o.method_id && param_index == o.param_index;
    }
};

/// Cascaded markup over one Program: sink tags, source tags and forward
/// tags carrying the line numbers each value flows into.
struct Markup {
    std::set<int> sink_stmts;                       // stmt ids
    std::map<int, SourceKind> stmt_sources;         // stmt id -> kind
    std::map<int, std::set<int>> stmt_forwards;     // stmt id -> target lines
    std::map<ParamKey, std::set<int>> param_forwards;

    bool stmt_tagged(int id) const {
        return sink_stmts.count(id) || stmt_sources.count(id) ||
               stmt_forwards.count(id);
    }
    bool param_tagged(const ParamKey& key) const {
        return param_forwards.count(key) > 0;
    }
};

struct TraceStats {
    int waves = 0;     // worklist generations until the fixed point
    int entities = 0;  // statements + parameters considered
};

/// Tags exactly the statements whose call expression names a catalog sink.
Markup mark_sinks(const Program& p, const Catalog& cat);

/// Propagates markup backward to a fixed point: assignments feeding tagged
/// statements, method call/return links, subscribe registrations, string
/// interpolation; stops along edges that reach a catalog source.
Markup trace_backward(const Program& p, Markup m, const Catalog& cat,
                      TraceStats* stats = nullptr);

struct Flow {
    std::vector<int> chain;  // origin line ... sink line
    std::optional<SourceKind> origin;
    std::string sink_name;
};

struct FlowReport {
    std::vector<Flow> flows;  // tainted only, deduplicated, sorted
    bool leaking = false;
};

/// Builds the tag tree and returns one Flow per source-rooted path to a sink.
FlowReport extract_flows(const Program& p, const Markup& m, const Catalog& cat);

/// The annotated source with untagged statements removed.
std::string render_slice_body(const Program& p, const Markup& m);

/// One line per flow: space-separated line numbers; "benign" when none.
std::string render_summary(const FlowReport& r);

/// Full report: summary, blank line, slice body.
std::string render_slice(const Program& p, const Markup& m, const FlowReport& r);

/// Convenience: mark, trace, extract in one call.
FlowReport analyze_program(const Program& p, const Catalog& cat,
                           Markup* markup_out = nullptr);

}  // namespace smartslice
