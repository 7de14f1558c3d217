#include "smartslice/source.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smartslice {

namespace {
int count_lines(const std::string& content) {
    if (content.empty()) return 0;
    int n = 1;
    for (size_t i = 0; i + 1 < content.size(); ++i)
        if (content[i] == '\n') ++n;
    if (content.back() == '\n' && content.size() == 1) return 1;
    return n;
}
}  // namespace

SourceFile SourceFile::from_string(std::string content, std::string path) {
    SourceFile f;
    f.path = std::move(path);
    f.content = std::move(content);
    f.line_count = count_lines(f.content);
    return f;
}

SourceFile SourceFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
}

std::vector<std::string> SourceFile::lines() const {
    std::vector<std::string> out;
    std::string cur;
    for (char c : content) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace smartslice
