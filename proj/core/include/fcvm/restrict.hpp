#pragma once

// Source-to-source lowering into restricted form: atomize application
// arguments, flatten let chains, and lift non-outermost cases into fresh
// top-level functions over their live variables.

#include <utility>
#include <vector>

#include "fcvm/ast.hpp"
#include "fcvm/rast.hpp"

namespace fcvm {

// Fresh names carry a '#', which the parser rejects in identifiers, so they
// can never collide with source names.
struct FreshNamer {
    Name base;
    int fn_counter = 0;
    int var_counter = 0;

    Name fresh_function() { return base + "#" + std::to_string(++fn_counter); }
    Name fresh_var() { return "v#" + std::to_string(++var_counter); }
};

// Lowers a whole program; input must pass validate_program.
RProgram restrict_program(const Program& p);

// Lowers one function; the first element is the function itself, followed by
// the lifted auxiliaries in creation order.
std::vector<RFuncDef> lift_cases(const FuncDef& f, FreshNamer& namer);

// Atomizes a case-free expression: returns the let prefix binding every
// non-variable argument, plus the residual expression over variables only.
// Throws std::logic_error if the expression contains a case.
std::pair<std::vector<std::pair<Name, RExpr>>, RExpr> atomize_expr(const ExprPtr& e,
                                                                   FreshNamer& namer);

}  // namespace fcvm
