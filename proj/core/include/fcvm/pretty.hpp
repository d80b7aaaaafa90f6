#pragma once

#include <string>

#include "fcvm/ast.hpp"
#include "fcvm/rast.hpp"

namespace fcvm {

// Canonical text form; parse_program(pretty(p)) == p up to source locations.
std::string pretty(const Program& p);
std::string pretty(const RProgram& p);
std::string pretty_expr(const ExprPtr& e);
std::string pretty_pattern(const Pattern& p);

}  // namespace fcvm
