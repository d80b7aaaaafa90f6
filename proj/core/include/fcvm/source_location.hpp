#pragma once

#include <cstdint>
#include <string>

namespace fcvm {

struct SourceLocation {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based

    std::string to_string() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(column);
    }
};

inline bool operator==(const SourceLocation& a, const SourceLocation& b) {
    return a.file == b.file && a.line == b.line && a.column == b.column;
}

}  // namespace fcvm
