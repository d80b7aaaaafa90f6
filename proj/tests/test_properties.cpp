#include "doctest.h"

#include <random>

#include "corpus.hpp"
#include "fcvm/oracle.hpp"
#include "fcvm/parse.hpp"
#include "fcvm/pretty.hpp"
#include "fcvm/restrict.hpp"
#include "fcvm/validate.hpp"

using namespace fcvm;
using namespace fcvm::testing;

TEST_CASE("trail soundness holds on every corpus program") {
    for (const auto& cp : corpus()) {
        INFO(cp.name);
        RProgram rp = restrict_program(parse_corpus(cp));
        CheckResult r = check_trail_soundness(rp, Limits{200'000, 0});
        INFO(r.detail);
        CHECK(r.ok);
    }
}

TEST_CASE("generated programs validate, round-trip and restrict cleanly") {
    std::mt19937 rng(12345);
    for (int i = 0; i < 100; ++i) {
        Program p = random_program(rng);
        INFO("program " << i << ":\n" << pretty(p));
        ValidationReport v = validate_program(p);
        INFO(v.to_string());
        REQUIRE(v.ok());

        Program reparsed = parse_program(pretty(p));
        CHECK(equal(p, reparsed));

        RProgram rp = restrict_program(p);
        ValidationReport rv = validate_restricted(rp);
        INFO(rv.to_string());
        CHECK(rv.ok());
    }
}

TEST_CASE("trail soundness holds on generated programs") {
    std::mt19937 rng(67890);
    for (int i = 0; i < 60; ++i) {
        Program p = random_program(rng);
        INFO("program " << i << ":\n" << pretty(p));
        CheckResult r = check_trail_soundness(restrict_program(p), Limits{200'000, 0}, 64);
        INFO(r.detail);
        CHECK(r.ok);
    }
}

TEST_CASE("engine and oracle agree on generated programs") {
    std::mt19937 rng(24680);
    for (int i = 0; i < 60; ++i) {
        Program p = random_program(rng);
        INFO("program " << i << ":\n" << pretty(p));
        CheckResult r = check_differential(restrict_program(p), 1'000'000);
        INFO(r.detail);
        CHECK(r.ok);
    }
}

TEST_CASE("expected corpus answers match both interpreters") {
    for (const auto& cp : corpus()) {
        if (cp.expected.empty() && cp.name != "member_miss" && cp.name != "fail_child" &&
            cp.name != "incomplete_lit" && cp.name != "apply_free_fn")
            continue;
        INFO(cp.name);
        Program p = parse_corpus(cp);
        RunResult engine = run_main(restrict_program(p), Limits{1'000'000, 0});
        REQUIRE_FALSE(engine.truncated);
        std::vector<std::string> got;
        for (const auto& t : engine.values()) got.push_back(to_string(t));
        CHECK(got == cp.expected);
    }
}
