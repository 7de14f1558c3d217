#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "smartslice/analysis.hpp"
#include "smartslice/parser.hpp"
#include "smartslice/paths.hpp"

using namespace smartslice;
using namespace smartslice::testing;

namespace {

Catalog oracle_catalog() { return load_catalog("sources:\nsrcA\nsrcB\n"); }

/// Random straight-line programs over a small variable pool, the two
/// configured sources, state reads and identity methods.
class ProgramGen {
  public:
    explicit ProgramGen(uint32_t seed) : rng_(seed) {}

    std::string straight_line(int max_stmts, bool with_methods) {
        std::string out;
        bool use_method = with_methods && chance(2);
        if (use_method) {
            out += "def mA(p) {\n    return p\n}\n";
            if (chance(2)) out += "def mB(p) {\n    return p\n}\n";
        }
        int n = 1 + pick(max_stmts);
        for (int i = 0; i < n; ++i) out += statement(use_method);
        return out;
    }

    std::string with_ifs(int max_ifs) {
        std::string out;
        int ifs = 1 + pick(max_ifs);
        int segments = ifs + 1 + pick(2);
        for (int seg = 0; seg < segments; ++seg) {
            if (ifs > 0 && chance(2)) {
                --ifs;
                out += "if (c" + std::to_string(seg) + ") {\n";
                int inner = 1 + pick(2);
                for (int i = 0; i < inner; ++i) out += "    " + statement(false);
                if (chance(2)) {
                    out += "} else {\n";
                    int in_else = 1 + pick(2);
                    for (int i = 0; i < in_else; ++i) out += "    " + statement(false);
                }
                out += "}\n";
            } else {
                out += statement(false);
            }
        }
        while (ifs-- > 0) {
            out += "if (late" + std::to_string(ifs) + ") {\n    " + statement(false) +
                   "}\n";
        }
        return out;
    }

  private:
    bool chance(int one_in) { return pick(one_in) == 0; }
    int pick(int n) { return static_cast<int>(rng_() % static_cast<uint32_t>(n)); }

    std::string var() { return "v" + std::to_string(pick(5)); }

    std::string value(bool allow_call, bool method_available) {
        switch (pick(allow_call && method_available ? 7 : 6)) {
            case 0: return "\"plain text\"";
            case 1: return var();
            case 2: return "srcA";
            case 3: return "\"tagged: $" + var() + "\"";
            case 4: return "\"from: $srcB\"";
            case 5: return "state.stored";
            default: {
                std::string callee = chance(2) ? "mA" : "mB";
                std::string arg = chance(2) ? var() : (chance(2) ? "srcA" : "\"lit\"");
                return callee + "(" + arg + ")";
            }
        }
    }

    std::string statement(bool method_available) {
        if (chance(4)) {
            std::string sink = chance(2) ? "sendSms" : "sendPush";
            std::string arg = chance(3) ? "\"note $" + var() + "\"" : var();
            if (chance(6)) arg = "srcA";
            return sink + "(" + arg + ")\n";
        }
        return var() + " = " + value(true, method_available) + "\n";
    }

    std::mt19937 rng_;
};

std::set<int> core_tainted_sinks(const Program& p, const Catalog& cat) {
    FlowReport r = analyze_program(p, cat);
    std::set<int> sinks;
    for (const auto& f : r.flows) sinks.insert(f.chain.back());
    return sinks;
}

std::set<int> oracle_sinks_straightline(const Program& p, const Catalog& cat) {
    std::vector<const Stmt*> flat;
    for (const auto& s : p.top_statements) flat.push_back(&s);
    OracleView view;
    oracle_collect(flat, p, cat, view);
    return oracle_tainted_sinks(view);
}

}  // namespace

TEST_CASE("core equals the def-use oracle on 250 random branch-free programs") {
    Catalog cat = oracle_catalog();
    ProgramGen gen(20240811);
    int mismatches = 0;
    for (int i = 0; i < 250; ++i) {
        std::string text = gen.straight_line(28, true);
        CAPTURE(i);
        CAPTURE(text);
        Program p = parse_text(text);
        std::set<int> core = core_tainted_sinks(p, cat);
        std::set<int> oracle = oracle_sinks_straightline(p, cat);
        if (core != oracle) {
            ++mismatches;
            CHECK(core == oracle);
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("variant unions equal the oracle over all decision vectors") {
    Catalog cat = oracle_catalog();
    ProgramGen gen(987654);
    int checked = 0;
    for (int i = 0; i < 80; ++i) {
        std::string text = gen.with_ifs(5);
        CAPTURE(i);
        CAPTURE(text);
        Program p = parse_text(text);

        // Oracle: resolve every decision vector by hand and union.
        std::set<int> oracle_union;
        auto expansions = oracle_expand(p.top_statements);
        for (const auto& flat : expansions) {
            OracleView view;
            oracle_collect(flat, p, cat, view);
            for (int line : oracle_tainted_sinks(view)) oracle_union.insert(line);
        }

        PathConfig cfg;
        cfg.mode = PathMode::WholeProgram;
        cfg.cap = 16;
        std::set<int> variant_union;
        for (const auto& variant : enumerate_paths(p, cfg, cat))
            for (int line : core_tainted_sinks(variant.program, cat))
                variant_union.insert(line);

        CHECK(variant_union == oracle_union);
        ++checked;
    }
    CHECK(checked >= 50);
}

TEST_CASE("variant count matches the oracle expansion count") {
    Catalog cat = oracle_catalog();
    ProgramGen gen(13579);
    for (int i = 0; i < 40; ++i) {
        std::string text = gen.with_ifs(4);
        CAPTURE(text);
        Program p = parse_text(text);
        PathConfig cfg;
        cfg.mode = PathMode::WholeProgram;
        cfg.cap = 16;
        auto variants = enumerate_paths(p, cfg, cat);
        auto expansions = oracle_expand(p.top_statements);
        CHECK(variants.size() == expansions.size());
    }
}
