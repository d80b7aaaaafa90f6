#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "fcvm/ast.hpp"

namespace fcvm {

struct ParseError : std::runtime_error {
    ParseError(SourceLocation loc, const std::string& msg)
        : std::runtime_error(loc.to_string() + ": " + msg), location(loc), message(msg) {}
    SourceLocation location;
    std::string message;
};

// Syntax-only parse; the result may still fail validation.
Program parse_program_unchecked(std::string_view text, const std::string& filename = "<input>");

// Parse and validate; validation diagnostics are promoted to ParseError
// (first diagnostic wins).
Program parse_program(std::string_view text, const std::string& filename = "<input>");

}  // namespace fcvm
