#include "smartslice/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "smartslice/clone.hpp"
#include "smartslice/errors.hpp"
#include "smartslice/parser.hpp"
#include "smartslice/ssa.hpp"

namespace smartslice {

namespace fs = std::filesystem;
using json = nlohmann::json;

Catalog catalog_for(const AnalysisConfig& cfg) {
    if (cfg.catalog_path) return load_catalog_file(*cfg.catalog_path);
    return default_catalog();
}

namespace {

int worker_count(const AnalysisConfig& cfg, size_t jobs) {
    int n = cfg.workers > 0
                ? cfg.workers
                : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    return static_cast<int>(std::min<size_t>(n, jobs == 0 ? 1 : jobs));
}

/// Runs fn(i) for i in [0, jobs) on up to `workers` threads. Exceptions
/// propagate from the first failing job.
template <typename Fn>
void parallel_for(size_t jobs, int workers, Fn&& fn) {
    if (jobs == 0) return;
    if (workers <= 1 || jobs == 1) {
        for (size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= jobs) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<size_t>(w)] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

FlowReport run_core(const Program& p, const Catalog& cat, Markup* markup) {
    return analyze_program(p, cat, markup);
}

}  // namespace

FileResult analyze_parsed(const Program& parsed, const Catalog& cat,
                          const AnalysisConfig& cfg) {
    FileResult result;
    result.file = parsed.source_name;

    const Program* current = &parsed;
    Program cloned;
    if (cfg.clone) {
        CloneResult cr = clone_methods(parsed, cfg.clone_depth);
        result.warnings = cr.warnings;
        result.clone_origin_lines = cr.origin_lines();
        cloned = std::move(cr.program);
        current = &cloned;
    }

    if (cfg.paths) {
        result.paths_mode = true;
        std::vector<PathVariant> variants =
            enumerate_paths(*current, cfg.path_cfg, cat);
        result.paths.resize(variants.size());
        parallel_for(variants.size(), worker_count(cfg, variants.size()),
                     [&](size_t i) {
                         Program variant = cfg.ssa ? to_ssa(variants[i].program)
                                                   : variants[i].program;
                         Markup m;
                         FlowReport report = run_core(variant, cat, &m);
                         result.paths[i].id = variants[i].id;
                         result.paths[i].slice_body = render_slice_body(variant, m);
                         result.paths[i].report = std::move(report);
                     });
        for (const auto& path : result.paths)
            if (path.report.leaking) result.leaking = true;
        return result;
    }

    Program transformed = cfg.ssa ? to_ssa(*current) : *current;
    Markup m;
    result.report = run_core(transformed, cat, &m);
    result.slice_body = render_slice_body(transformed, m);
    result.leaking = result.report.leaking;
    return result;
}

FileResult analyze_file(const std::string& path, const AnalysisConfig& cfg) {
    Catalog cat = catalog_for(cfg);
    auto wall_start = std::chrono::steady_clock::now();
    std::clock_t cpu_start = std::clock();

    SourceFile src = SourceFile::load(path);
    Program parsed = parse_source(src);
    FileResult result = analyze_parsed(parsed, cat, cfg);
    result.file = fs::path(path).filename().string();

    result.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - wall_start)
                         .count();
    result.cpu_ms = 1000.0 * static_cast<double>(std::clock() - cpu_start) /
                    CLOCKS_PER_SEC;
    return result;
}

BatchReport analyze_batch(const std::string& dir, const AnalysisConfig& cfg) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".groovy")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    BatchReport batch;
    auto wall_start = std::chrono::steady_clock::now();
    std::clock_t cpu_start = std::clock();

    std::vector<std::optional<FileResult>> results(files.size());
    std::vector<std::string> failures(files.size());
    AnalysisConfig file_cfg = cfg;
    file_cfg.workers = 1;  // files are the unit of parallelism here
    parallel_for(files.size(), worker_count(cfg, files.size()), [&](size_t i) {
        try {
            results[i] = analyze_file(files[i].string(), file_cfg);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    for (size_t i = 0; i < files.size(); ++i) {
        std::string name = files[i].filename().string();
        if (results[i])
            batch.per_file.emplace(name, std::move(*results[i]));
        else
            batch.errors.emplace(name, failures[i]);
    }
    batch.total_wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - wall_start)
                              .count();
    batch.total_cpu_ms = 1000.0 * static_cast<double>(std::clock() - cpu_start) /
                         CLOCKS_PER_SEC;
    return batch;
}

Metrics compute_metrics(const BatchReport& reports,
                        const std::map<std::string, bool>& labels) {
    Metrics metrics;
    for (const auto& [file, result] : reports.per_file) {
        auto it = labels.find(file);
        if (it == labels.end()) throw MissingLabel(file);
        bool truth = it->second;
        if (result.leaking && truth) ++metrics.tp;
        if (result.leaking && !truth) ++metrics.fp;
        if (!result.leaking && truth) ++metrics.fn;
        if (!result.leaking && !truth) ++metrics.tn;
    }
    if (metrics.tp + metrics.fp > 0)
        metrics.precision =
            static_cast<double>(metrics.tp) / (metrics.tp + metrics.fp);
    if (metrics.tp + metrics.fn > 0)
        metrics.recall = static_cast<double>(metrics.tp) / (metrics.tp + metrics.fn);
    return metrics;
}

std::map<std::string, bool> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);
    std::map<std::string, bool> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("label line " + std::to_string(line_no) +
                                     " is not 'file,leaking|benign'");
        std::string file = line.substr(0, comma);
        std::string verdict = line.substr(comma + 1);
        while (!verdict.empty() && (verdict.back() == '\r' || verdict.back() == ' '))
            verdict.pop_back();
        if (verdict != "leaking" && verdict != "benign")
            throw std::runtime_error("label line " + std::to_string(line_no) +
                                     ": verdict must be leaking or benign");
        labels[file] = verdict == "leaking";
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Histograms

std::string emit_histograms(const std::string& dir, const Catalog& cat) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".groovy")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::map<int, int> total, per_method, affecting;
    std::vector<std::pair<std::string, int>> outliers;
    std::vector<std::string> errors;
    for (const auto& file : files) {
        try {
            Program p = parse_source(SourceFile::load(file.string()));
            IfStats stats = if_stats(p, cat);
            ++total[stats.total_ifs];
            ++per_method[stats.max_ifs_per_method];
            ++affecting[stats.flow_affecting_ifs];
            if (stats.total_ifs > 50)
                outliers.emplace_back(file.filename().string(), stats.total_ifs);
        } catch (const std::exception& e) {
            errors.push_back(file.filename().string() + ": " + e.what());
        }
    }

    std::ostringstream out;
    auto table = [&](const char* title, const std::map<int, int>& hist) {
        out << title << "\n";
        out << "ifs apps\n";
        for (const auto& [bucket, count] : hist)
            out << bucket << " " << count << "\n";
        out << "\n";
    };
    table("# if-statements per app", total);
    table("# max if-statements in one method", per_method);
    table("# flow-affecting if-statements per app", affecting);
    if (!outliers.empty()) {
        out << "outliers (> 50 if-statements):\n";
        for (const auto& [name, n] : outliers) out << name << " " << n << "\n";
        out << "\n";
    }
    for (const auto& e : errors) out << "error: " << e << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Report rendering

namespace {

std::string compose_slice(const FlowReport& report, const std::string& body) {
    std::string out = render_summary(report);
    if (!body.empty()) out += "\n" + body;
    return out;
}

std::string compose_path_slice(const PathResult& path) {
    // Batch listing order: slice first, then the chain summary.
    std::string out = path.slice_body;
    if (!out.empty()) out += "\n";
    out += render_summary(path.report);
    return out;
}

}  // namespace

std::string render_text_report(const FileResult& result) {
    std::ostringstream out;
    out << "Running " << result.file << "\n";
    if (!result.paths_mode) {
        out << compose_slice(result.report, result.slice_body);
    } else {
        for (const auto& path : result.paths) {
            out << "Path: " << (path.id.empty() ? "-" : path.id) << "\n\n";
            out << compose_path_slice(path) << "\n";
        }
        out << "verdict: " << (result.leaking ? "leaking" : "benign") << "\n";
    }
    for (const auto& warning : result.warnings) out << "warning: " << warning << "\n";
    return out.str();
}

std::string render_structured_report(const FileResult& result) {
    std::ostringstream out;
    auto flow_record = [&](const Flow& flow, const std::string& path_id) {
        json record;
        record["file"] = result.file;
        record["kind"] = "flow";
        if (!path_id.empty() || result.paths_mode) record["path"] = path_id;
        record["chain"] = flow.chain;
        record["origin"] = flow.origin ? to_string(*flow.origin) : "";
        record["sink"] = flow.sink_name;
        if (!result.clone_origin_lines.empty()) {
            json map = json::object();
            for (const auto& [clone_line, original] : result.clone_origin_lines)
                map[std::to_string(clone_line)] = original;
            record["clone_origin_lines"] = map;
        }
        out << record.dump() << "\n";
    };
    if (result.paths_mode) {
        for (const auto& path : result.paths)
            for (const auto& flow : path.report.flows) flow_record(flow, path.id);
    } else {
        for (const auto& flow : result.report.flows) flow_record(flow, "");
    }
    json verdict;
    verdict["file"] = result.file;
    verdict["kind"] = "verdict";
    verdict["verdict"] = result.leaking ? "leaking" : "benign";
    if (!result.warnings.empty()) verdict["warnings"] = result.warnings;
    out << verdict.dump() << "\n";
    return out.str();
}

}  // namespace smartslice
