#include "smartslice/catalog.hpp"

#include <fstream>
#include <sstream>

#include "smartslice/errors.hpp"

namespace smartslice {

std::string to_string(SourceKind kind) {
    switch (kind) {
        case SourceKind::UserInput: return "user_input";
        case SourceKind::StateVariable: return "state_variable";
        case SourceKind::DeviceState: return "device_state";
        case SourceKind::DeviceInfo: return "device_info";
        case SourceKind::Location: return "location";
        case SourceKind::EventParam: return "event_param";
    }
    return "unknown";
}

std::optional<SourceKind> source_kind_from_string(const std::string& name) {
    if (name == "user_input") return SourceKind::UserInput;
    if (name == "state_variable") return SourceKind::StateVariable;
    if (name == "device_state") return SourceKind::DeviceState;
    if (name == "device_info") return SourceKind::DeviceInfo;
    if (name == "location") return SourceKind::Location;
    if (name == "event_param") return SourceKind::EventParam;
    return std::nullopt;
}

Catalog default_catalog() {
    Catalog cat;
    cat.sink_names = {
        "httpDelete",
        "httpGet",
        "httpHead",
        "httpPost",
        "httpPostJson",
        "httpPut",
        "sendSms",
        "sendSmsMessage",
        "sendNotificationEvent",
        "sendNotification",
        "sendNotificationToContacts",
        "sendPush",
        "sendPushMessage",
    };
    cat.source_kinds = {
        SourceKind::UserInput,    SourceKind::StateVariable,
        SourceKind::DeviceState,  SourceKind::DeviceInfo,
        SourceKind::Location,     SourceKind::EventParam,
    };
    return cat;
}

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool plain_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return !std::isdigit(static_cast<unsigned char>(s[0]));
}

}  // namespace

Catalog load_catalog(const std::string& config_text) {
    Catalog cat = default_catalog();
    enum class Sect { None, Sinks, Kinds, Sources };
    Sect sect = Sect::None;
    bool kinds_reset = false;

    std::istringstream in(config_text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.back() == ':') {
            std::string header = line.substr(0, line.size() - 1);
            if (header == "sinks") {
                sect = Sect::Sinks;
            } else if (header == "source_kinds") {
                sect = Sect::Kinds;
                if (!kinds_reset) {
                    cat.source_kinds.clear();
                    kinds_reset = true;
                }
            } else if (header == "sources") {
                sect = Sect::Sources;
            } else {
                throw ConfigError(line_no, "unknown section '" + header + ":'");
            }
            continue;
        }
        switch (sect) {
            case Sect::None:
                throw ConfigError(line_no, "entry '" + line + "' outside a section");
            case Sect::Sinks: {
                bool remove = line[0] == '-';
                std::string name = remove ? strip(line.substr(1)) : line;
                if (!plain_identifier(name))
                    throw ConfigError(line_no, "'" + name + "' is not an identifier");
                if (remove)
                    cat.sink_names.erase(name);
                else
                    cat.sink_names.insert(name);
                break;
            }
            case Sect::Kinds: {
                auto kind = source_kind_from_string(line);
                if (!kind)
                    throw ConfigError(line_no, "unknown source kind '" + line + "'");
                cat.source_kinds.insert(*kind);
                break;
            }
            case Sect::Sources: {
                if (!plain_identifier(line))
                    throw ConfigError(line_no, "'" + line + "' is not an identifier");
                cat.extra_source_idents.insert(line);
                break;
            }
        }
    }
    return cat;
}

Catalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_catalog(ss.str());
}

std::string render_catalog(const Catalog& cat) {
    std::ostringstream out;
    out << "sinks:\n";
    for (const auto& name : cat.sink_names) out << name << "\n";
    out << "source_kinds:\n";
    for (const auto& kind : cat.source_kinds) out << to_string(kind) << "\n";
    out << "sources:\n";
    for (const auto& name : cat.extra_source_idents) out << name << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------

SourceIndex::SourceIndex(const Program& program, const Catalog& catalog)
    : catalog_(catalog) {
    if (program.preferences)
        for (const auto& section : program.preferences->sections)
            for (const auto& input : section.inputs)
                input_names_.insert(input.name);
    for_each_stmt(program, [&](const Stmt& s) {
        if (auto* sub = std::get_if<SubscribeStmt>(&s.node))
            if (sub->resolved) handler_names_.insert(sub->handler);
    });
}

std::optional<SourceKind> SourceIndex::classify_identifier(
    const std::string& name) const {
    if (catalog_.extra_source_idents.count(name) &&
        catalog_.enabled(SourceKind::UserInput))
        return SourceKind::UserInput;
    if (input_names_.count(name) && catalog_.enabled(SourceKind::UserInput))
        return SourceKind::UserInput;
    if (name == "location" && catalog_.enabled(SourceKind::Location))
        return SourceKind::Location;
    return std::nullopt;
}

std::optional<SourceKind> SourceIndex::classify_property(
    const std::string& base, const std::string& member) const {
    if (base == "state" && catalog_.enabled(SourceKind::StateVariable))
        return SourceKind::StateVariable;
    if (base == "location" && catalog_.enabled(SourceKind::Location))
        return SourceKind::Location;
    if (input_names_.count(base)) {
        static const std::set<std::string> info_members = {
            "displayName", "name", "label", "id", "deviceNetworkId"};
        if (info_members.count(member))
            return catalog_.enabled(SourceKind::DeviceInfo)
                       ? std::optional<SourceKind>(SourceKind::DeviceInfo)
                       : std::nullopt;
        return catalog_.enabled(SourceKind::DeviceState)
                   ? std::optional<SourceKind>(SourceKind::DeviceState)
                   : std::nullopt;
    }
    // Any other read through an extra source identifier stays a source.
    if (catalog_.extra_source_idents.count(base) &&
        catalog_.enabled(SourceKind::UserInput))
        return SourceKind::UserInput;
    return std::nullopt;
}

std::optional<SourceKind> SourceIndex::classify(const Expr& expr) const {
    if (auto* ident = std::get_if<Identifier>(&expr.node))
        return classify_identifier(ident->name);
    if (auto* prop = std::get_if<Property>(&expr.node)) {
        if (auto* base = std::get_if<Identifier>(&prop->base[0].node))
            return classify_property(base->name, prop->member);
        return std::nullopt;
    }
    if (auto* lit = std::get_if<StringLit>(&expr.node)) {
        // Hard-coded strings are benign; interpolation defers to the slots.
        for (const auto& slot : lit->slots) {
            if (slot.members.empty()) {
                if (auto kind = classify_identifier(slot.ident)) return kind;
            } else if (auto kind = classify_property(slot.ident, slot.members[0])) {
                return kind;
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<SourceKind> SourceIndex::classify_param(
    const std::string& method_name) const {
    if (handler_names_.count(method_name) && catalog_.enabled(SourceKind::EventParam))
        return SourceKind::EventParam;
    return std::nullopt;
}

}  // namespace smartslice
