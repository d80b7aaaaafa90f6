#pragma once

// Fully normalized answers: constructor/literal trees with named unbound
// variables. Shared by the engine and the reference oracle so their results
// are directly comparable.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fcvm/ast.hpp"

namespace fcvm {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct ConT {
    Name con;
    std::vector<TermPtr> args;
};
struct LitT {
    std::int64_t value = 0;
};
struct FreeT {
    std::string name;  // _a, _b, ... in first-occurrence order
};

struct Term {
    std::variant<ConT, LitT, FreeT> node;
};

inline TermPtr make_term(std::variant<ConT, LitT, FreeT> node) {
    return std::make_shared<Term>(Term{std::move(node)});
}

bool equal(const TermPtr& a, const TermPtr& b);
std::string to_string(const TermPtr& t);

struct Answer {
    enum class Outcome { Value, Failure };
    Outcome outcome = Outcome::Failure;
    TermPtr term;                     // set iff outcome == Value
    std::uint64_t frames_consumed = 0;  // frames applied by the backtrack that
                                        // enabled this attempt (0 for the first)

    static Answer value(TermPtr t, std::uint64_t frames = 0) {
        return Answer{Outcome::Value, std::move(t), frames};
    }
    static Answer failure(std::uint64_t frames = 0) {
        return Answer{Outcome::Failure, nullptr, frames};
    }
    bool is_value() const { return outcome == Outcome::Value; }
};

std::string to_string(const Answer& a);

// Positional free-variable names: _a, _b, ..., _z, _a1, _b1, ...
std::string free_var_name(int index);

}  // namespace fcvm
