#pragma once

// The execution engine: head-normal-form evaluation over the heap graph,
// normalization, and left-first answer enumeration through the backtracking
// trail.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fcvm/graph.hpp"
#include "fcvm/rast.hpp"
#include "fcvm/term.hpp"
#include "fcvm/trail.hpp"

namespace fcvm {

enum class Rule {
    Bot,
    Lit,
    Free,
    Con,
    Choice,
    Fun,
    Let,
    Var,
    CaseBot,
    CaseFwd,
    CaseFun,
    CaseChoice,
    CaseLit,
    CaseCon,
    CaseLitFree,
    CaseConFree,
    ApplyFree,
    ApplyChoice,
    ApplyUnder,
    ApplyFull,
    ApplyOver,
    NormBot,
    NormLit,
    NormFree,
    NormCon,
    NormChoice,
    Bt,
    BtChoice,
    Count_,
};

const char* rule_name(Rule r);
constexpr std::size_t kRuleCount = static_cast<std::size_t>(Rule::Count_);

struct Limits {
    std::uint64_t max_steps = 10'000'000;
    std::uint64_t max_answers = 0;  // 0 = unlimited
};

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Resource signal, distinct from a failed (Bot) computation.
struct BudgetExhausted : std::runtime_error {
    explicit BudgetExhausted(const char* what = "step budget exhausted")
        : std::runtime_error(what) {}
};

struct TraceEvent {
    Rule rule;
    NodeId node;
    std::size_t depth;  // trail depth at the time of the event
};
using TraceFn = std::function<void(const TraceEvent&)>;

std::string format_trace_line(const TraceEvent& ev);

using Env = std::vector<std::pair<Name, NodeId>>;

class Machine {
public:
    explicit Machine(const RProgram& prog, Limits limits = {});

    Graph graph;
    BtStack stack;
    std::uint64_t steps = 0;
    std::array<std::uint64_t, kRuleCount> rule_counts{};
    TraceFn trace;  // observational only; null means no tracing
    Limits limits;

    const RProgram& program() const { return *prog_; }

    // Allocates the entry application `main` and makes it the graph root.
    NodeId make_root();

    // Allocates a function body: let bindings become fresh nodes, parameters
    // are bound to the argument nodes by reference, and the returned node
    // holds the body's return expression (a fresh forwarding node when the
    // body returns a bare variable; the pending case dispatch when the body
    // is a case).
    NodeId instantiate(const Name& fname, const std::vector<NodeId>& args);

    // Reduces node n in place until its content is a head normal form:
    // fail, literal, constructor, free variable, choice, partial application
    // or forwarding node. Every rewrite of a pre-existing node is journaled
    // on the trail.
    void hnf(NodeId n);

    // Case dispatch on a scrutinee node; `outer` receives the selected
    // branch's value (or fail).
    void eval_case(NodeId scrutinee, const std::vector<RBranch>& branches, const Env& env,
                   NodeId outer);

    // Eval-apply dispatch: reduces fn to head normal form, then applies.
    void apply(NodeId fn, std::vector<NodeId> args, NodeId outer);

    // Evaluates to normal form and extracts the answer; Bot anywhere in the
    // result yields Failure. Throws BudgetExhausted past the step limit.
    Answer normalize(NodeId root);

    // Traced backtracking to the next choice point. Returns the number of
    // frames applied, or nullopt when the trail is exhausted.
    std::optional<std::uint64_t> backtrack();

    // Term extraction with forwarding nodes contracted; free variables are
    // named _a, _b, ... in first-occurrence order.
    TermPtr extract_term(NodeId n) const;

private:
    struct DepthGuard;
    void step(Rule r, NodeId n);
    void rewrite(NodeId n, NodeContent c);       // journaled
    void push_choice(NodeId n, NodeContent alternative);
    void exec_function(NodeId n, const FunN& app);
    void exec_stmt(const RStmtPtr& stmt, Env env, NodeId outer);
    void exec_return(const RExpr& e, const Env& env, NodeId outer);
    void alloc_group(const std::vector<std::pair<Name, RExpr>>& bindings, Env& env);
    NodeContent rexpr_content(const RExpr& e, const Env& env, NodeId self);
    NodeContent saturated(const Name& head, std::vector<NodeId> args) const;
    int head_arity(const Name& head) const;
    bool norm_node(NodeId n);

    const RProgram* prog_;
};

struct RunResult {
    std::vector<Answer> answers;  // values and failures, in enumeration order
    bool truncated = false;
    std::string truncation_reason;

    std::vector<TermPtr> values() const {
        std::vector<TermPtr> out;
        for (const auto& a : answers)
            if (a.is_value()) out.push_back(a.term);
        return out;
    }
};

// The top-level loop: normalize, record, backtrack to the next choice,
// repeat until exhaustion or limits.
RunResult run_main(const RProgram& p, Limits limits = {}, TraceFn trace = nullptr,
                   const std::function<void(const Machine&)>& on_answer = nullptr);

// Same loop over an existing machine whose root has been made; the machine
// state stays inspectable afterwards.
RunResult run_machine(Machine& m, const std::function<void(const Machine&)>& on_answer = nullptr);

}  // namespace fcvm
