#pragma once

#include <string>
#include <vector>

namespace smartslice {

struct SourceFile {
    std::string path;
    std::string content;
    int line_count = 0;

    static SourceFile from_string(std::string content,
                                  std::string path = "<memory>");
    static SourceFile load(const std::string& path);

    std::vector<std::string> lines() const;
};

}  // namespace smartslice
