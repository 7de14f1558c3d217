#pragma once

#include <stdexcept>
#include <string>

namespace smartslice {

struct LexError : std::runtime_error {
    int line;
    int column;
    LexError(int line, int column, const std::string& what)
        : std::runtime_error("lex error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) +
                             ": " + what),
          line(line) {}
};

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line, const std::string& what)
        : std::runtime_error("catalog config error at line " +
                             std::to_string(line) + ": " + what),
          line(line) {}
};

struct SsaError : std::runtime_error {
    int line;
    SsaError(int line, const std::string& what)
        : std::runtime_error("ssa error at line " + std::to_string(line) +
                             ": " + what),
          line(line) {}
};

struct UnknownIf : std::runtime_error {
    explicit UnknownIf(int id)
        : std::runtime_error("no if-statement with id " + std::to_string(id)) {}
};

struct CapExceeded : std::runtime_error {
    int count;
    int cap;
    CapExceeded(int count, int cap)
        : std::runtime_error("path generation would resolve " +
                             std::to_string(count) +
                             " if-statements, exceeding the cap of " +
                             std::to_string(cap)),
          count(count),
          cap(cap) {}
};

struct MissingLabel : std::runtime_error {
    std::string file;
    explicit MissingLabel(const std::string& file)
        : std::runtime_error("no label for analyzed file: " + file),
          file(file) {}
};

}  // namespace smartslice
