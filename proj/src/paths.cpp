#include "smartslice/paths.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "smartslice/analysis.hpp"
#include "smartslice/errors.hpp"

namespace smartslice {

std::string to_string(PathMode mode) {
    switch (mode) {
        case PathMode::WholeProgram: return "whole";
        case PathMode::PerMethod: return "per-method";
        case PathMode::FlowAffecting: return "flow-affecting";
    }
    return "unknown";
}

namespace {

/// Splices the chosen branch of the if with the given id into its parent
/// statement list. Returns true when found.
bool resolve_if_in(std::vector<Stmt>& body, int id, bool take_true) {
    for (size_t i = 0; i < body.size(); ++i) {
        Stmt& stmt = body[i];
        if (stmt.id == id) {
            auto* iff = std::get_if<IfStmt>(&stmt.node);
            if (!iff) throw UnknownIf(id);
            std::vector<Stmt> branch =
                take_true ? std::move(iff->then_body) : std::move(iff->else_body);
            body.erase(body.begin() + static_cast<long>(i));
            body.insert(body.begin() + static_cast<long>(i),
                        std::make_move_iterator(branch.begin()),
                        std::make_move_iterator(branch.end()));
            return true;
        }
        bool found = std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, IfStmt>) {
                    return resolve_if_in(node.then_body, id, take_true) ||
                           resolve_if_in(node.else_body, id, take_true);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    return resolve_if_in(node.body, id, take_true);
                } else {
                    return false;
                }
            },
            stmt.node);
        if (found) return true;
    }
    return false;
}

Program resolve_if(const Program& p, int id, bool take_true) {
    Program out = p;
    if (resolve_if_in(out.top_statements, id, take_true)) return out;
    for (auto& m : out.methods)
        if (resolve_if_in(m.body, id, take_true)) return out;
    throw UnknownIf(id);
}

struct IfSite {
    int id = 0;
    int line = 0;
    int group = -1;  // method index, -1 for top level
};

void collect_ifs_in(const std::vector<Stmt>& body, int group,
                    std::vector<IfSite>& out) {
    for (const auto& stmt : body) {
        if (auto* iff = std::get_if<IfStmt>(&stmt.node)) {
            out.push_back({stmt.id, stmt.line, group});
            collect_ifs_in(iff->then_body, group, out);
            collect_ifs_in(iff->else_body, group, out);
        } else if (auto* blk = std::get_if<BlockStmt>(&stmt.node)) {
            collect_ifs_in(blk->body, group, out);
        }
    }
}

std::vector<IfSite> collect_ifs(const Program& p) {
    std::vector<IfSite> out;
    collect_ifs_in(p.top_statements, -1, out);
    for (size_t mi = 0; mi < p.methods.size(); ++mi)
        collect_ifs_in(p.methods[mi].body, static_cast<int>(mi), out);
    std::sort(out.begin(), out.end(),
              [](const IfSite& a, const IfSite& b) { return a.line < b.line; });
    return out;
}

/// If-statements whose subtree holds a statement marked by the insensitive
/// analysis.
std::set<int> affecting_if_ids(const Program& p, const Catalog& cat) {
    Markup m = trace_backward(p, mark_sinks(p, cat), cat);
    std::set<int> out;
    std::function<bool(const std::vector<Stmt>&)> scan =
        [&](const std::vector<Stmt>& body) {
            bool tagged = false;
            for (const auto& stmt : body) {
                bool inner = false;
                if (auto* iff = std::get_if<IfStmt>(&stmt.node)) {
                    bool t = scan(iff->then_body);
                    bool e = scan(iff->else_body);
                    inner = t || e;
                    if (inner) out.insert(stmt.id);
                } else if (auto* blk = std::get_if<BlockStmt>(&stmt.node)) {
                    inner = scan(blk->body);
                }
                tagged = tagged || inner || m.stmt_tagged(stmt.id);
            }
            return tagged;
        };
    scan(p.top_statements);
    for (const auto& method : p.methods) scan(method.body);
    return out;
}

/// First targeted if per group under per_method mode, or the single first
/// targeted if otherwise. Document order.
std::vector<int> pick_next(const Program& p, const std::set<int>& targeted,
                           PathMode mode) {
    std::vector<IfSite> sites = collect_ifs(p);
    std::vector<int> picked;
    if (mode == PathMode::PerMethod) {
        std::set<int> groups_done;
        for (const auto& site : sites) {
            if (!targeted.count(site.id) || groups_done.count(site.group)) continue;
            groups_done.insert(site.group);
            picked.push_back(site.id);
        }
    } else {
        for (const auto& site : sites) {
            if (!targeted.count(site.id)) continue;
            picked.push_back(site.id);
            break;
        }
    }
    return picked;
}

void enumerate(const Program& cur, const std::set<int>& targeted, PathMode mode,
               std::string prefix, std::vector<PathVariant>& out) {
    std::vector<int> picked = pick_next(cur, targeted, mode);
    if (picked.empty()) {
        out.push_back({std::move(prefix), cur});
        return;
    }
    Program t = cur;
    for (int id : picked) t = true_path(t, id);
    enumerate(t, targeted, mode, prefix + "T", out);
    Program f = cur;
    for (int id : picked) f = false_path(f, id);
    enumerate(f, targeted, mode, prefix + "F", out);
}

}  // namespace

Program true_path(const Program& p, int if_stmt_id) {
    return resolve_if(p, if_stmt_id, true);
}

Program false_path(const Program& p, int if_stmt_id) {
    return resolve_if(p, if_stmt_id, false);
}

std::vector<PathVariant> enumerate_paths(const Program& p, const PathConfig& cfg,
                                         const Catalog& cat) {
    std::vector<IfSite> sites = collect_ifs(p);
    std::set<int> targeted;
    int count = 0;
    switch (cfg.mode) {
        case PathMode::WholeProgram:
            for (const auto& site : sites) targeted.insert(site.id);
            count = static_cast<int>(targeted.size());
            break;
        case PathMode::PerMethod: {
            for (const auto& site : sites) targeted.insert(site.id);
            std::map<int, int> per_group;
            for (const auto& site : sites) ++per_group[site.group];
            for (const auto& [group, n] : per_group) count = std::max(count, n);
            break;
        }
        case PathMode::FlowAffecting: {
            std::set<int> affecting = affecting_if_ids(p, cat);
            targeted = std::move(affecting);
            count = static_cast<int>(targeted.size());
            break;
        }
    }
    if (count > cfg.cap) throw CapExceeded(count, cfg.cap);
    std::vector<PathVariant> out;
    enumerate(p, targeted, cfg.mode, "", out);
    return out;
}

IfStats if_stats(const Program& p, const Catalog& cat) {
    IfStats stats;
    std::vector<IfSite> sites = collect_ifs(p);
    stats.total_ifs = static_cast<int>(sites.size());
    std::map<int, int> per_group;
    for (const auto& site : sites) ++per_group[site.group];
    for (const auto& [group, n] : per_group)
        stats.max_ifs_per_method = std::max(stats.max_ifs_per_method, n);
    stats.flow_affecting_ifs = static_cast<int>(affecting_if_ids(p, cat).size());
    return stats;
}

}  // namespace smartslice
