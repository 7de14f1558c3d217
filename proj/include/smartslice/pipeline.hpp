#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smartslice/analysis.hpp"
#include "smartslice/catalog.hpp"
#include "smartslice/paths.hpp"

namespace smartslice {

enum class OutputFormat { Text, Structured };

struct AnalysisConfig {
    bool ssa = false;
    bool paths = false;
    bool clone = false;
    PathConfig path_cfg;
    std::optional<std::string> catalog_path;
    OutputFormat output_format = OutputFormat::Text;
    int workers = 0;  // 0: pick from hardware
    int clone_depth = 8;
};

struct PathResult {
    std::string id;
    FlowReport report;
    std::string slice_body;
};

/// Report for one file: either a single FlowReport or one per path variant.
struct FileResult {
    std::string file;
    bool leaking = false;
    FlowReport report;           // paths disabled
    std::string slice_body;      // paths disabled
    std::vector<PathResult> paths;  // paths enabled
    bool paths_mode = false;
    std::vector<std::string> warnings;
    std::map<int, int> clone_origin_lines;  // clone decl line -> original
    double wall_ms = 0.0;
    double cpu_ms = 0.0;
};

struct BatchReport {
    std::map<std::string, FileResult> per_file;
    std::map<std::string, std::string> errors;  // file -> diagnostic
    double total_wall_ms = 0.0;
    double total_cpu_ms = 0.0;
};

struct Metrics {
    int tp = 0, fp = 0, fn = 0, tn = 0;
    std::optional<double> precision;  // absent when tp+fp == 0
    std::optional<double> recall;     // absent when tp+fn == 0
};

/// Runs the configured pipeline (parse, optional clone, optional path
/// enumeration, optional SSA, analyze) on one already-parsed program.
FileResult analyze_parsed(const Program& p, const Catalog& cat,
                          const AnalysisConfig& cfg);

/// As analyze_parsed, reading and parsing the file first. Lex, parse and
/// cap errors surface as exceptions for the batch runner to record.
FileResult analyze_file(const std::string& path, const AnalysisConfig& cfg);

/// Analyzes every .groovy file under dir (not recursive), deterministically
/// ordered by filename, on a worker pool. Per-file failures are recorded,
/// never fatal.
BatchReport analyze_batch(const std::string& dir, const AnalysisConfig& cfg);

/// Verdict-vs-label counting. Labels map filename (basename) to true for
/// leaking. Every analyzed file must be labeled, else MissingLabel.
Metrics compute_metrics(const BatchReport& reports,
                        const std::map<std::string, bool>& labels);

std::map<std::string, bool> load_labels(const std::string& path);

/// Three two-column histograms (total ifs, max per method, flow affecting)
/// over a corpus directory, with an outlier list for apps above 50 ifs.
std::string emit_histograms(const std::string& dir, const Catalog& cat);

/// Text report for one file, shaped like the batch output listing:
/// `Running <file>`, per-path slices and chains, or the single slice.
std::string render_text_report(const FileResult& result);

/// Line-delimited structured records (JSON), one per flow plus a final
/// verdict record; deterministic across runs.
std::string render_structured_report(const FileResult& result);

Catalog catalog_for(const AnalysisConfig& cfg);

}  // namespace smartslice
