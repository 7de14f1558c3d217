#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "smartslice/ast.hpp"

namespace smartslice {

enum class SourceKind {
    UserInput,
    StateVariable,
    DeviceState,
    DeviceInfo,
    Location,
    EventParam,
};

std::string to_string(SourceKind kind);
std::optional<SourceKind> source_kind_from_string(const std::string& name);

/// The configurable sets that parameterize the analysis: which call names
/// leak data off-device and which reads count as sensitive.
struct Catalog {
    std::set<std::string> sink_names;
    std::set<SourceKind> source_kinds;
    std::set<std::string> extra_source_idents;

    bool is_sink(const std::string& name) const { return sink_names.count(name) > 0; }
    bool enabled(SourceKind kind) const { return source_kinds.count(kind) > 0; }
};

Catalog default_catalog();

/// Line-oriented config: sections `sinks:`, `source_kinds:`, `sources:`,
/// one identifier per line, `#` comments. `sinks:` entries extend the
/// default set (a `-name` entry removes), `source_kinds:` replaces the
/// enabled set, `sources:` lists extra identifiers treated as sources.
Catalog load_catalog(const std::string& config_text);
Catalog load_catalog_file(const std::string& path);
std::string render_catalog(const Catalog& cat);

/// Program-aware source classification. Built once per analyzed program;
/// resolves which identifiers are preference inputs and which methods are
/// subscribe-registered handlers.
class SourceIndex {
  public:
    SourceIndex(const Program& program, const Catalog& catalog);

    /// Classification for a read of a plain identifier.
    std::optional<SourceKind> classify_identifier(const std::string& name) const;

    /// Classification for a property read `base.member` (state.x, device.prop).
    std::optional<SourceKind> classify_property(const std::string& base,
                                                const std::string& member) const;

    /// Classification for a whole expression: the strongest source it reads
    /// directly (literals without slots classify as nothing).
    std::optional<SourceKind> classify(const Expr& expr) const;

    /// event_param classification for a method parameter declaration.
    std::optional<SourceKind> classify_param(const std::string& method_name) const;

    bool is_input_device(const std::string& name) const {
        return input_names_.count(name) > 0;
    }
    bool is_handler(const std::string& method_name) const {
        return handler_names_.count(method_name) > 0;
    }

    const Catalog& catalog() const { return catalog_; }

  private:
    const Catalog& catalog_;
    std::set<std::string> input_names_;
    std::set<std::string> handler_names_;
};

}  // namespace smartslice
