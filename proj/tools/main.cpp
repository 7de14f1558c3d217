#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "smartslice/errors.hpp"
#include "smartslice/pipeline.hpp"

namespace fs = std::filesystem;
using namespace smartslice;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

void add_pipeline_flags(CLI::App* cmd, AnalysisConfig& cfg, std::string& mode,
                        std::string& catalog) {
    cmd->add_flag("--ssa", cfg.ssa, "rename variables to single-assignment form");
    cmd->add_flag("--paths", cfg.paths, "enumerate execution-path variants");
    cmd->add_flag("--clone", cfg.clone, "clone methods per call site");
    cmd->add_option("--path-mode", mode, "whole|per-method|flow-affecting")
        ->check(CLI::IsMember({"whole", "per-method", "flow-affecting"}));
    cmd->add_option("--path-cap", cfg.path_cfg.cap,
                    "max if-statements resolved by path generation");
    cmd->add_option("--catalog", catalog, "sink/source catalog file");
    cmd->add_option("--workers", cfg.workers, "worker threads");
}

void apply_mode(AnalysisConfig& cfg, const std::string& mode,
                const std::string& catalog) {
    if (mode == "whole") cfg.path_cfg.mode = PathMode::WholeProgram;
    if (mode == "per-method") cfg.path_cfg.mode = PathMode::PerMethod;
    if (mode == "flow-affecting") cfg.path_cfg.mode = PathMode::FlowAffecting;
    if (!catalog.empty()) cfg.catalog_path = catalog;
}

void print_file_result(const FileResult& result, const AnalysisConfig& cfg) {
    if (cfg.output_format == OutputFormat::Structured)
        std::cout << render_structured_report(result);
    else
        std::cout << render_text_report(result);
}

int run_analyze(const std::string& target, AnalysisConfig& cfg) {
    if (fs::is_directory(target)) {
        BatchReport batch = analyze_batch(target, cfg);
        for (const auto& [name, result] : batch.per_file)
            print_file_result(result, cfg);
        for (const auto& [name, error] : batch.errors) {
            if (cfg.output_format == OutputFormat::Structured)
                std::cout << "{\"file\":\"" << name << "\",\"kind\":\"error\",\"error\":\""
                          << error << "\"}\n";
            else
                std::cout << "Running " << name << "\nerror: " << error << "\n";
        }
        if (cfg.output_format == OutputFormat::Text)
            std::cout << "total: " << batch.per_file.size() << " analyzed, "
                      << batch.errors.size() << " errors, "
                      << batch.total_wall_ms / 1000.0 << "s\n";
        return kExitOk;
    }
    if (!fs::exists(target)) {
        std::cerr << "no such file or directory: " << target << "\n";
        return kExitIo;
    }
    try {
        FileResult result = analyze_file(target, cfg);
        print_file_result(result, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"static taint analysis for SmartApp Groovy sources"};
    app.require_subcommand(1);

    AnalysisConfig cfg;
    std::string mode = "flow-affecting";
    std::string catalog;
    std::string format = "text";
    std::string target;
    std::string labels_path;

    auto* analyze = app.add_subcommand("analyze", "analyze a file or directory");
    analyze->add_option("target", target, "groovy file or directory")->required();
    add_pipeline_flags(analyze, cfg, mode, catalog);
    analyze->add_option("--format", format, "text|structured")
        ->check(CLI::IsMember({"text", "structured"}));

    auto* metrics = app.add_subcommand("metrics", "precision/recall over a labeled corpus");
    metrics->add_option("target", target, "directory of groovy files")->required();
    metrics->add_option("--labels", labels_path, "file,leaking|benign per line")
        ->required();
    add_pipeline_flags(metrics, cfg, mode, catalog);

    auto* stats = app.add_subcommand("stats", "if-statement histograms for a corpus");
    stats->add_option("target", target, "directory of groovy files")->required();
    stats->add_option("--catalog", catalog, "sink/source catalog file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    apply_mode(cfg, mode, catalog);
    if (format == "structured") cfg.output_format = OutputFormat::Structured;

    try {
        if (analyze->parsed()) return run_analyze(target, cfg);
        if (metrics->parsed()) {
            auto labels = load_labels(labels_path);
            BatchReport batch = analyze_batch(target, cfg);
            Metrics m = compute_metrics(batch, labels);
            std::cout << "tp " << m.tp << "\nfp " << m.fp << "\nfn " << m.fn
                      << "\ntn " << m.tn << "\n";
            std::cout << "precision "
                      << (m.precision ? std::to_string(*m.precision) : "n/a") << "\n";
            std::cout << "recall " << (m.recall ? std::to_string(*m.recall) : "n/a")
                      << "\n";
            if (!batch.errors.empty()) {
                std::cout << "errors " << batch.errors.size() << "\n";
                for (const auto& [name, error] : batch.errors)
                    std::cout << "error: " << name << ": " << error << "\n";
            }
            return kExitOk;
        }
        if (stats->parsed()) {
            Catalog cat = catalog.empty() ? default_catalog()
                                          : load_catalog_file(catalog);
            std::cout << emit_histograms(target, cat);
            return kExitOk;
        }
    } catch (const MissingLabel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
