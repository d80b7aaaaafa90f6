#pragma once

// Well-formedness checks. Diagnostics are data, not failures; callers decide
// whether to promote them to errors.

#include <string>
#include <vector>

#include "fcvm/ast.hpp"
#include "fcvm/rast.hpp"

namespace fcvm {

struct Diagnostic {
    SourceLocation loc;
    std::string rule;     // short identifier of the violated rule
    std::string message;  // human-readable detail
};

struct ValidationReport {
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
    std::string to_string() const;
};

// Scope, arity and pattern checks for full FlatCurry programs.
ValidationReport validate_program(const Program& p);

// Checks that a program is in restricted form: variable-only application
// arguments, flat lets, at most one case per function and it is outermost
// with a variable scrutinee. Includes all validate_program checks.
ValidationReport validate_restricted(const Program& p);
ValidationReport validate_restricted(const RProgram& p);

// All constructors of `con`'s data type in declaration order.
// Throws UnknownConstructorError for undeclared names.
std::vector<ConstructorDecl> constructor_siblings(const Program& p, const Name& con);
std::vector<ConstructorDecl> constructor_siblings(const RProgram& p, const Name& con);

struct UnknownConstructorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fcvm
