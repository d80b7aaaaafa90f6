#pragma once

// An independent reference interpreter in natural-semantics style with
// deterministic left-first search. It shares only the AST and the answer
// term type with the engine, never its graph or trail, so differential
// comparisons are meaningful.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcvm/ast.hpp"
#include "fcvm/rast.hpp"
#include "fcvm/term.hpp"

namespace fcvm {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Variable-to-expression heap; a variable mapped to itself is a logic
// variable.
struct NatHeap {
    std::map<Name, ExprPtr> bindings;
};

struct NatConfig {
    NatHeap heap;
    ExprPtr control;
    std::vector<bool> path;  // left/right decisions taken so far
    std::uint64_t budget = 1'000'000;
};

struct NatValue {
    NatHeap heap;
    ExprPtr value;  // literal, constructor over variables, or a free variable
    std::vector<bool> path;
};

struct NatHnfResult {
    std::vector<NatValue> values;
    bool truncated = false;
};

struct OracleStats {
    std::uint64_t nat_val = 0;
    std::uint64_t nat_var_cons = 0;
    std::uint64_t nat_var_exp = 0;
    std::uint64_t nat_fun = 0;
    std::uint64_t nat_let = 0;
    std::uint64_t nat_or = 0;
    std::uint64_t nat_select = 0;
    std::uint64_t nat_guess = 0;
};

// All head-normal derivations of the configuration, left branch first.
NatHnfResult nat_hnf(const Program& p, NatConfig config, OracleStats* stats = nullptr);

struct OracleResult {
    std::vector<TermPtr> answers;  // free variables canonicalized per answer
    bool truncated = false;
};

// Full normal forms of the entry function, in left-first order. Rejects
// higher-order programs (partial references and general application).
OracleResult oracle_normalize(const Program& p, std::uint64_t budget = 1'000'000,
                              OracleStats* stats = nullptr);
OracleResult oracle_normalize(const RProgram& p, std::uint64_t budget = 1'000'000,
                              OracleStats* stats = nullptr);

enum class CompareMode { Ordered, Multiset };

struct CompareReport {
    bool equal = false;
    std::string detail;  // first divergence, when unequal
};

CompareReport compare_answers(const std::vector<TermPtr>& engine_answers,
                              const std::vector<TermPtr>& oracle_answers, CompareMode mode);

// Canonical free-variable names (_a, _b, ... in first-occurrence order).
TermPtr canonicalize_term(const TermPtr& t);

}  // namespace fcvm
