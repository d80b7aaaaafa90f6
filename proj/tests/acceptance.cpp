// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "fcvm/engine.hpp"
#include "fcvm/oracle.hpp"
#include "fcvm/parse.hpp"
#include "fcvm/pretty.hpp"
#include "fcvm/restrict.hpp"
#include "fcvm/validate.hpp"

using namespace fcvm;
using namespace fcvm::testing;

namespace {

struct Criterion {
    std::string id;
    std::string description;
    std::function<std::string()> run;  // empty string = pass, otherwise failure detail
};

std::vector<std::string> value_lines(const RunResult& r) {
    std::vector<std::string> out;
    for (const auto& t : r.values()) out.push_back(to_string(t));
    return out;
}

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += ", ";
        out += x;
    }
    return "[" + out + "]";
}

// --- AC-1: flattening golden test ------------------------------------------

// structural equality of restricted functions modulo lifted function names
bool requal_mod_names(const RExpr& a, const RExpr& b, std::map<Name, Name>& fn_map);

bool stmt_equal_mod_names(const RStmtPtr& a, const RStmtPtr& b, std::map<Name, Name>& fn_map) {
    if (a->node.index() != b->node.index()) return false;
    if (const auto* la = std::get_if<RLet>(&a->node)) {
        const auto& lb = std::get<RLet>(b->node);
        if (la->bindings.size() != lb.bindings.size()) return false;
        for (std::size_t i = 0; i < la->bindings.size(); ++i) {
            if (la->bindings[i].first != lb.bindings[i].first) return false;
            if (!requal_mod_names(la->bindings[i].second, lb.bindings[i].second, fn_map))
                return false;
        }
        return stmt_equal_mod_names(la->rest, lb.rest, fn_map);
    }
    return requal_mod_names(std::get<RReturn>(a->node).expr, std::get<RReturn>(b->node).expr,
                            fn_map);
}

bool requal_mod_names(const RExpr& a, const RExpr& b, std::map<Name, Name>& fn_map) {
    if (a.index() != b.index()) return false;
    if (const auto* fa = std::get_if<RFunApp>(&a)) {
        const auto& fb = std::get<RFunApp>(b);
        if (fa->args != fb.args) return false;
        auto it = fn_map.find(fa->fn);
        if (it != fn_map.end()) return it->second == fb.fn;
        if (fa->fn == fb.fn) return true;
        fn_map[fa->fn] = fb.fn;  // fresh auxiliary names may differ
        return true;
    }
    return equal(a, b);
}

std::string ac1_flatten_golden() {
    Program p = parse_program(
        "data Bool = False | True\n"
        "and x y = case x of { False -> False; True -> case y of { False -> False; True -> True "
        "} }\n"
        "main = and True True\n");
    RProgram rp = restrict_program(p);
    // expected: and casing on x, True branch calling an auxiliary over y;
    // the auxiliary casing on y with direct constructor returns
    const RFuncDef* and_def = rp.find_function("and");
    if (!and_def) return "no `and` in output";
    const auto* c = std::get_if<RCase>(&and_def->body);
    if (!c) return "`and` is not a single outermost case";
    if (c->scrutinee != "x") return "`and` does not scrutinize x";
    if (c->branches.size() != 2) return "`and` branch count != 2";

    auto ret_con = [](const RStmtPtr& s, const char* con) -> bool {
        const auto* r = std::get_if<RReturn>(&s->node);
        if (!r) return false;
        const auto* c2 = std::get_if<RConApp>(&r->expr);
        return c2 && c2->con == con && c2->args.empty();
    };
    if (!ret_con(c->branches[0].body, "False")) return "False branch is not `False`";
    const auto* tr = std::get_if<RReturn>(&c->branches[1].body->node);
    if (!tr) return "True branch is not a plain return";
    const auto* call = std::get_if<RFunApp>(&tr->expr);
    if (!call) return "True branch does not call the auxiliary";
    if (call->args != std::vector<Name>{"y"}) return "auxiliary is not applied to exactly y";

    const RFuncDef* aux = rp.find_function(call->fn);
    if (!aux) return "auxiliary " + call->fn + " missing";
    if (aux->params != std::vector<Name>{"y"}) return "auxiliary params are not [y]";
    const auto* ac = std::get_if<RCase>(&aux->body);
    if (!ac) return "auxiliary is not a single outermost case";
    if (ac->scrutinee != "y") return "auxiliary does not scrutinize y";
    if (ac->branches.size() != 2) return "auxiliary branch count != 2";
    if (!ret_con(ac->branches[0].body, "False")) return "aux False branch is not `False`";
    if (!ret_con(ac->branches[1].body, "True")) return "aux True branch is not `True`";

    // exactly the two functions plus main
    if (rp.functions.size() != 3) return "expected exactly and, auxiliary and main";
    return "";
}

// --- AC-2: trail soundness ---------------------------------------------------

std::string ac2_trail_soundness() {
    const auto& named = corpus();
    if (named.size() < 20)
        return "corpus has only " + std::to_string(named.size()) + " programs (need >= 20)";
    for (const auto& cp : named) {
        RProgram rp = restrict_program(parse_corpus(cp));
        CheckResult r = check_trail_soundness(rp, Limits{200'000, 0});
        if (!r.ok) return cp.name + ": " + r.detail;
    }
    std::mt19937 rng(424242);
    for (int i = 0; i < 200; ++i) {
        Program p = random_program(rng);
        CheckResult r = check_trail_soundness(restrict_program(p), Limits{200'000, 0}, 64);
        if (!r.ok) return "generated program " + std::to_string(i) + ": " + r.detail + "\n" +
                          pretty(p);
    }
    return "";
}

// --- AC-3: sharing -----------------------------------------------------------

std::string ac3_sharing() {
    Program p = parse_program(
        "data Bool = False | True\n"
        "id x = x\n"
        "not x = case x of { True -> False; False -> True }\n"
        "xor x y = case x of { False -> y; True -> not y }\n"
        "main = let x = True ? False in xor (id x) (id x)\n");
    RunResult r = run_main(restrict_program(p), Limits{1'000'000, 0});
    std::vector<std::string> got = value_lines(r);
    if (got.size() != 2)
        return "expected exactly 2 answers, got " + std::to_string(got.size()) + " " + join(got);
    for (const auto& a : got)
        if (a == "True") return "broken sharing: a True answer appeared " + join(got);
    if (got[0] != "False" || got[1] != "False") return "answers are not both False " + join(got);
    return "";
}

// --- AC-4: differential suite ------------------------------------------------

std::string ac4_differential() {
    for (const auto& cp : corpus()) {
        if (!cp.first_order || !cp.terminating) continue;
        CheckResult r = check_differential(restrict_program(parse_corpus(cp)), 1'000'000);
        if (!r.ok) return cp.name + ": " + r.detail;
    }
    std::mt19937 rng(171717);
    for (int i = 0; i < 200; ++i) {
        Program p = random_program(rng);
        CheckResult r = check_differential(restrict_program(p), 1'000'000);
        if (!r.ok)
            return "generated program " + std::to_string(i) + ": " + r.detail + "\n" + pretty(p);
    }
    return "";
}

// --- AC-5: narrowing ---------------------------------------------------------

std::string ac5_narrowing() {
    Program p = parse_program(
        "data Bool = False | True\n"
        "main = let x free in case x of { True -> False; False -> True }\n");
    RProgram rp = restrict_program(p);
    Machine m(rp, Limits{1'000'000, 0});
    NodeId narrowed{};
    std::uint64_t con_free_events = 0;
    m.trace = [&](const TraceEvent& ev) {
        if (ev.rule == Rule::CaseConFree) {
            narrowed = ev.node;
            ++con_free_events;
        }
    };
    m.make_root();
    std::uint64_t backtracks = 0;
    NodeId root = m.graph.root;
    std::vector<std::string> got;
    for (;;) {
        Answer a = m.normalize(root);
        if (a.is_value()) got.push_back(to_string(a.term));
        ++backtracks;
        if (!m.backtrack()) break;
    }
    if (got != std::vector<std::string>{"False", "True"})
        return "answers " + join(got) + " != [False, True]";
    if (con_free_events != 1)
        return "Case-ConFree fired " + std::to_string(con_free_events) + " times, expected 1";
    if (backtracks != 2)
        return "expected 2 backtracking sweeps, saw " + std::to_string(backtracks);
    if (!narrowed.valid()) return "no narrowing event observed";
    if (!std::holds_alternative<FreeN>(m.graph.get(narrowed)))
        return "post-exhaustion unwind did not restore the free variable";
    if (!m.stack.empty()) return "trail not empty after exhaustion";
    return "";
}

// --- AC-6: apply rules -------------------------------------------------------

std::string ac6_apply_rules() {
    const char* src =
        "data Bool = False | True\n"
        "id x = x\n"
        "not x = case x of { True -> False; False -> True }\n"
        "and x y = case x of { False -> False; True -> case y of { False -> False; True -> True "
        "} }\n"
        "k1 z = z\n"
        "k2 x y = k1\n"
        "main = 0\n";
    RProgram rp = restrict_program(parse_program(src));

    {  // Apply-Under: missing-count arithmetic k - n
        Machine m(rp);
        NodeId t = m.graph.alloc(ConN{"True", {}});
        NodeId part = m.graph.alloc(PartN{"and", 2, {}});
        NodeId outer = m.graph.alloc(BotN{});
        m.apply(part, {t}, outer);
        const auto* result = std::get_if<PartN>(&m.graph.get(outer));
        if (!result || result->head != "and" || result->missing != 1 ||
            result->supplied != std::vector<NodeId>{t})
            return "Apply-Under: wrong conclusion";
        if (m.rule_counts[static_cast<std::size_t>(Rule::ApplyUnder)] != 1)
            return "Apply-Under did not fire exactly once";
    }
    {  // Apply-Full: saturate and evaluate
        Machine m(rp);
        NodeId t = m.graph.alloc(ConN{"True", {}});
        NodeId part = m.graph.alloc(PartN{"not", 1, {}});
        NodeId outer = m.graph.alloc(FunN{kApplyBuiltin, {part, t}});
        m.hnf(outer);
        const auto* con = std::get_if<ConN>(&m.graph.get(outer));
        if (!con || con->con != "False") return "Apply-Full: not True != False";
        if (m.rule_counts[static_cast<std::size_t>(Rule::ApplyFull)] != 1)
            return "Apply-Full did not fire exactly once";
    }
    {  // Apply-Over: split at the missing count
        Machine m(rp);
        NodeId a = m.graph.alloc(LitN{0});
        NodeId b = m.graph.alloc(LitN{1});
        NodeId c = m.graph.alloc(LitN{2});
        NodeId part = m.graph.alloc(PartN{"k2", 2, {}});
        NodeId outer = m.graph.alloc(FunN{kApplyBuiltin, {part, a, b, c}});
        m.hnf(outer);
        NodeId v = m.graph.contract_fwd(outer);
        const auto* lit = std::get_if<LitN>(&m.graph.get(v));
        if (!lit || lit->value != 2) return "Apply-Over: wrong result";
        if (m.rule_counts[static_cast<std::size_t>(Rule::ApplyOver)] != 1)
            return "Apply-Over did not fire exactly once";
    }
    {  // Apply-Free: failure
        Machine m(rp);
        NodeId f = m.graph.alloc(FreeN{});
        NodeId x = m.graph.alloc(LitN{0});
        NodeId outer = m.graph.alloc(FunN{kApplyBuiltin, {f, x}});
        m.hnf(outer);
        if (!std::holds_alternative<BotN>(m.graph.get(outer)))
            return "Apply-Free: expected failure";
        if (m.rule_counts[static_cast<std::size_t>(Rule::ApplyFree)] != 1)
            return "Apply-Free did not fire exactly once";
    }
    {  // Apply-Choice: left-first with a resumption frame
        Machine m(rp);
        NodeId pn = m.graph.alloc(PartN{"not", 1, {}});
        NodeId pi = m.graph.alloc(PartN{"id", 1, {}});
        NodeId fn = m.graph.alloc(ChoiceN{pn, pi});
        NodeId t = m.graph.alloc(ConN{"True", {}});
        NodeId outer = m.graph.alloc(FunN{kApplyBuiltin, {fn, t}});
        m.hnf(outer);
        const auto* con = std::get_if<ConN>(&m.graph.get(outer));
        if (!con || con->con != "False") return "Apply-Choice: left branch not taken first";
        bool frame_ok = false;
        for (const auto& fr : m.stack.frames()) {
            if (fr.is_choice && fr.target == fn) {
                const auto* alt = std::get_if<FwdN>(&fr.replacement);
                frame_ok = alt && alt->target == pi;
            }
        }
        if (!frame_ok) return "Apply-Choice: right alternative not recorded on the trail";
        // full enumeration through the engine: both alternatives
        Program p2 = parse_program(
            "data Bool = False | True\n"
            "id x = x\n"
            "not x = case x of { True -> False; False -> True }\n"
            "main = let f = not ? id in apply f True\n");
        RunResult r = run_main(restrict_program(p2));
        if (value_lines(r) != std::vector<std::string>{"False", "True"})
            return "Apply-Choice enumeration: " + join(value_lines(r));
    }
    return "";
}

// --- AC-7: enumeration order -------------------------------------------------

std::string ac7_enumeration_order() {
    {
        RunResult r = run_main(restrict_program(parse_program("main = 0 ? 1\n")));
        if (value_lines(r) != std::vector<std::string>{"0", "1"})
            return "0 ? 1 -> " + join(value_lines(r));
    }
    {
        RunResult r = run_main(restrict_program(parse_program("main = (0 ? 1) ? 2\n")));
        if (value_lines(r) != std::vector<std::string>{"0", "1", "2"})
            return "(0 ? 1) ? 2 -> " + join(value_lines(r));
    }
    {
        Program p = parse_program("main = 0 ? 1\n");
        RunResult r = run_main(restrict_program(mirror_choices(p)));
        if (value_lines(r) != std::vector<std::string>{"1", "0"})
            return "mirrored 0 ? 1 -> " + join(value_lines(r));
    }
    {
        Program p = parse_program(
            "data Bool = False | True\n"
            "main = True ? False\n");
        RunResult straight = run_main(restrict_program(p));
        RunResult mirrored = run_main(restrict_program(mirror_choices(p)));
        std::vector<std::string> s = value_lines(straight);
        std::vector<std::string> rev(s.rbegin(), s.rend());
        if (value_lines(mirrored) != rev) return "mirror did not reverse the order";
    }
    return "";
}

// --- AC-8: frontend round-trip and fuzzing ------------------------------------

std::string ac8_frontend() {
    for (const auto& cp : corpus()) {
        Program p = parse_corpus(cp);
        Program q = parse_program(pretty(p), cp.name + "<printed>");
        if (!equal(p, q)) return cp.name + ": print/parse round trip changed the AST";
    }
    std::mt19937 rng(808080);
    for (int i = 0; i < 50; ++i) {
        Program p = random_program(rng);
        Program q = parse_program(pretty(p));
        if (!equal(p, q)) return "generated program round trip changed the AST:\n" + pretty(p);
    }
    // fuzzing: >= 10^4 inputs, no failure other than a located parse error
    const std::string alphabet =
        "abcdefghXYZC0123456789 \t?=|;,(){}->\nletcaseoffaildatafree--#~!$%&'\"\\";
    std::uniform_int_distribution<int> len_dist(0, 160);
    std::uniform_int_distribution<std::size_t> char_dist(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    for (int i = 0; i < 10'000; ++i) {
        std::string input;
        int len = len_dist(rng);
        input.reserve(static_cast<std::size_t>(len));
        if (i % 5 == 0) {  // raw bytes, including non-UTF-8
            for (int j = 0; j < len; ++j) input += static_cast<char>(byte_dist(rng));
        } else {
            for (int j = 0; j < len; ++j) input += alphabet[char_dist(rng)];
        }
        try {
            (void)parse_program(input, "<fuzz>");
        } catch (const ParseError&) {
            // expected shape of rejection
        } catch (const std::exception& e) {
            return "fuzz case " + std::to_string(i) + " escaped with " + e.what() + "\n" + input;
        }
    }
    return "";
}

// --- AC-9: failure discipline --------------------------------------------------

std::string ac9_failure() {
    const char* miss =
        "data Bool = False | True\n"
        "data List = Nil | Cons 2\n"
        "not x = case x of { True -> False; False -> True }\n"
        "eqb x y = case x of { True -> y; False -> not y }\n"
        "pickOne l = case l of { Cons x xs -> x ? pickOne xs }\n"
        "member x l = case eqb x (pickOne l) of { True -> True }\n"
        "main = member True (Cons False Nil)\n";
    RunResult r = run_main(restrict_program(parse_program(miss)), Limits{1'000'000, 0});
    if (r.truncated) return "member run truncated";
    if (!r.values().empty()) return "expected zero answers, got " + join(value_lines(r));
    for (const auto& a : r.answers) {
        if (a.is_value() && to_string(a.term).find("fail") != std::string::npos)
            return "a failure was printed as a value";
    }
    // the matching variant still succeeds exactly once
    const char* hit =
        "data Bool = False | True\n"
        "data List = Nil | Cons 2\n"
        "not x = case x of { True -> False; False -> True }\n"
        "eqb x y = case x of { True -> y; False -> not y }\n"
        "pickOne l = case l of { Cons x xs -> x ? pickOne xs }\n"
        "member x l = case eqb x (pickOne l) of { True -> True }\n"
        "main = member True (Cons False (Cons True Nil))\n";
    RunResult r2 = run_main(restrict_program(parse_program(hit)), Limits{1'000'000, 0});
    if (value_lines(r2) != std::vector<std::string>{"True"})
        return "member hit: " + join(value_lines(r2));
    return "";
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"AC-1", "flattening golden test (and/and1 split)", ac1_flatten_golden},
        {"AC-2", "trail soundness over corpus and 200 generated programs", ac2_trail_soundness},
        {"AC-3", "sharing: xor (id x) (id x) has exactly two False answers", ac3_sharing},
        {"AC-4", "differential agreement with the natural-semantics oracle", ac4_differential},
        {"AC-5", "narrowing enumerates [False, True] and restores the variable", ac5_narrowing},
        {"AC-6", "apply rules match their conclusions", ac6_apply_rules},
        {"AC-7", "left-first enumeration order", ac7_enumeration_order},
        {"AC-8", "frontend round-trip and 10^4-case fuzzing", ac8_frontend},
        {"AC-9", "failure discipline for member-style programs", ac9_failure},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            std::cout << c.id << " PASS  " << c.description << "\n";
        } else {
            ++failures;
            std::cout << c.id << " FAIL  " << c.description << "\n      " << detail << "\n";
        }
    }
    return failures == 0 ? 0 : 1;
}
