#include "doctest.h"

#include "corpus.hpp"
#include "fcvm/parse.hpp"
#include "fcvm/pretty.hpp"
#include "fcvm/validate.hpp"

using namespace fcvm;

namespace {

bool has_rule(const ValidationReport& r, const std::string& rule) {
    for (const auto& d : r.diagnostics)
        if (d.rule == rule) return true;
    return false;
}

const char* kAndProgram =
    "data Bool = False | True\n"
    "and x y = case x of { False -> False; True -> case y of { False -> False; True -> True } }\n"
    "main = and True True\n";

}  // namespace

TEST_CASE("validate accepts the nested-case and program") {
    Program p = parse_program_unchecked(kAndProgram);
    CHECK(validate_program(p).ok());
}

TEST_CASE("validate reports a missing entry") {
    Program p = parse_program_unchecked("data Bool = False | True\nf x = x\n");
    ValidationReport r = validate_program(p);
    CHECK_FALSE(r.ok());
    CHECK(has_rule(r, "undefined-entry"));
}

TEST_CASE("validate reports constructor arity mismatches") {
    Program p = parse_program_unchecked("data Bool = False | True\nmain = True\n");
    // force an over-saturated constructor application directly
    p.functions[0].body = make_expr(ConAppE{"True", {make_expr(LitE{1})}});
    ValidationReport r = validate_program(p);
    CHECK(has_rule(r, "constructor-arity"));
}

TEST_CASE("validate catches unbound variables and duplicate binders") {
    Program p = parse_program_unchecked("main = let { x = 0; x = 1 } in y\n");
    ValidationReport r = validate_program(p);
    CHECK(has_rule(r, "let-names-distinct"));
    CHECK(has_rule(r, "unbound-variable"));
}

TEST_CASE("validate rejects mixed and duplicate case patterns") {
    Program mixed = parse_program_unchecked(
        "data Bool = False | True\nmain = case True of { True -> 0; 1 -> 2 }\n");
    CHECK(has_rule(validate_program(mixed), "mixed-patterns"));

    Program dup = parse_program_unchecked(
        "data Bool = False | True\nmain = case True of { True -> 0; True -> 1 }\n");
    CHECK(has_rule(validate_program(dup), "duplicate-pattern"));
}

TEST_CASE("validate rejects case branches spanning two data types") {
    Program p = parse_program_unchecked(
        "data Bool = False | True\ndata RGB = R | G | B\n"
        "main = case True of { True -> 0; R -> 1 }\n");
    CHECK(has_rule(validate_program(p), "pattern-types"));
}

TEST_CASE("constructor_siblings returns declaration order") {
    Program p = parse_program_unchecked("data Bool = False | True\ndata RGB = R | G | B\nmain = 0\n");
    auto bools = constructor_siblings(p, "True");
    REQUIRE(bools.size() == 2);
    CHECK(bools[0].name == "False");
    CHECK(bools[1].name == "True");
    auto rgb = constructor_siblings(p, "G");
    REQUIRE(rgb.size() == 3);
    CHECK(rgb[0].name == "R");
    CHECK(rgb[2].name == "B");
    CHECK_THROWS_AS(constructor_siblings(p, "Foo"), UnknownConstructorError);
}

TEST_CASE("validate_restricted accepts the restricted and/and1 pair") {
    Program p = parse_program_unchecked(
        "data Bool = False | True\n"
        "and x y = case x of { False -> False; True -> and1 y }\n"
        "and1 y = case y of { False -> False; True -> True }\n"
        "main = let { a = True; b = True } in and a b\n");
    CHECK(validate_restricted(p).ok());
}

TEST_CASE("validate_restricted flags a non-variable scrutinee") {
    Program p = parse_program_unchecked(
        "data Bool = False | True\n"
        "id x = x\n"
        "f x = case id x of { True -> 0; False -> 1 }\n"
        "main = f True\n");
    CHECK(has_rule(validate_restricted(p), "non-variable-scrutinee"));
}

TEST_CASE("validate_restricted flags more than one case") {
    Program p = parse_program_unchecked(
        "data Bool = False | True\n"
        "f x = case x of { True -> case x of { True -> 0; False -> 1 }; False -> 2 }\n"
        "main = f True\n");
    CHECK(has_rule(validate_restricted(p), "multiple-cases"));
}

TEST_CASE("validate_restricted flags non-variable arguments") {
    Program p = parse_program_unchecked(
        "data Bool = False | True\n"
        "id x = x\n"
        "f x = id (id x)\n"
        "main = f True\n");
    CHECK(has_rule(validate_restricted(p), "non-variable-argument"));
}

TEST_CASE("expression equality ignores locations") {
    Program a = parse_program_unchecked("main = let { x = 0 ? 1 } in x\n");
    Program b = parse_program_unchecked("\n\nmain =    let { x = 0 ? 1 }   in x\n");
    CHECK(equal(a, b));
    Program c = parse_program_unchecked("main = let { x = 1 ? 1 } in x\n");
    CHECK_FALSE(equal(a, c));
}

TEST_CASE("free_vars returns first-occurrence order") {
    Program p = parse_program_unchecked("f a b c = MkP (g b) a\ng x = x\nmain = 0\n");
    // body of f: MkP (g b) a — free variables in first-occurrence order
    auto fv = free_vars(p.functions[0].body);
    REQUIRE(fv.size() == 2);
    CHECK(fv[0] == "b");
    CHECK(fv[1] == "a");
}

TEST_CASE("every corpus program validates") {
    for (const auto& cp : fcvm::testing::corpus()) {
        INFO(cp.name);
        CHECK_NOTHROW((void)fcvm::testing::parse_corpus(cp));
    }
}
