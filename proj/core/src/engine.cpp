#include "fcvm/engine.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

NodeId env_lookup(const Env& env, const Name& n) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == n) return it->second;
    throw EngineError("unbound variable in function body: " + n);
}

}  // namespace

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Bot: return "Bot";
        case Rule::Lit: return "Lit";
        case Rule::Free: return "Free";
        case Rule::Con: return "Con";
        case Rule::Choice: return "Choice";
        case Rule::Fun: return "Fun";
        case Rule::Let: return "Let";
        case Rule::Var: return "Var";
        case Rule::CaseBot: return "Case-Bot";
        case Rule::CaseFwd: return "Case-Fwd";
        case Rule::CaseFun: return "Case-Fun";
        case Rule::CaseChoice: return "Case-Choice";
        case Rule::CaseLit: return "Case-Lit";
        case Rule::CaseCon: return "Case-Con";
        case Rule::CaseLitFree: return "Case-LitFree";
        case Rule::CaseConFree: return "Case-ConFree";
        case Rule::ApplyFree: return "Apply-Free";
        case Rule::ApplyChoice: return "Apply-Choice";
        case Rule::ApplyUnder: return "Apply-Under";
        case Rule::ApplyFull: return "Apply-Full";
        case Rule::ApplyOver: return "Apply-Over";
        case Rule::NormBot: return "Norm-Bot";
        case Rule::NormLit: return "Norm-Lit";
        case Rule::NormFree: return "Norm-Free";
        case Rule::NormCon: return "Norm-Con";
        case Rule::NormChoice: return "Norm-Choice";
        case Rule::Bt: return "BT";
        case Rule::BtChoice: return "BT-Choice";
        case Rule::Count_: break;
    }
    return "?";
}

std::string format_trace_line(const TraceEvent& ev) {
    std::ostringstream os;
    os << "RULE " << rule_name(ev.rule) << " node=" << ev.node.index << " depth=" << ev.depth;
    return os.str();
}

Machine::Machine(const RProgram& prog, Limits lim) : limits(lim), prog_(&prog) {}

void Machine::step(Rule r, NodeId n) {
    if (++steps > limits.max_steps) throw BudgetExhausted();
    ++rule_counts[static_cast<std::size_t>(r)];
    if (trace) trace(TraceEvent{r, n, stack.depth()});
}

void Machine::rewrite(NodeId n, NodeContent c) {
    stack.push(Frame{n, graph.get(n), false});
    graph.set(n, std::move(c));
}

void Machine::push_choice(NodeId n, NodeContent alternative) {
    stack.push(Frame{n, std::move(alternative), true});
}

NodeId Machine::make_root() {
    const RFuncDef* entry = prog_->find_function(prog_->entry);
    if (!entry) throw EngineError("entry function " + prog_->entry + " is not defined");
    if (!entry->params.empty())
        throw EngineError("entry function " + prog_->entry + " must have arity 0");
    NodeId root = graph.alloc(FunN{prog_->entry, {}});
    graph.root = root;
    return root;
}

int Machine::head_arity(const Name& head) const {
    if (const RFuncDef* f = prog_->find_function(head)) return static_cast<int>(f->params.size());
    if (const ConstructorInfo* c = prog_->find_constructor(head)) return c->arity;
    throw EngineError("unknown function or constructor: " + head);
}

NodeContent Machine::saturated(const Name& head, std::vector<NodeId> args) const {
    if (prog_->find_function(head)) return FunN{head, std::move(args)};
    if (prog_->find_constructor(head)) return ConN{head, std::move(args)};
    throw EngineError("unknown function or constructor: " + head);
}

NodeContent Machine::rexpr_content(const RExpr& e, const Env& env, NodeId self) {
    return std::visit(
        overloaded{
            [&](const RVar& x) -> NodeContent {
                NodeId t = env_lookup(env, x.name);
                // a binding that refers only to itself is a logic variable
                if (t == self) return FreeN{};
                return FwdN{t};
            },
            [&](const RLit& x) -> NodeContent { return LitN{x.value}; },
            [&](const RBot&) -> NodeContent { return BotN{}; },
            [&](const RChoice& x) -> NodeContent {
                return ChoiceN{env_lookup(env, x.left), env_lookup(env, x.right)};
            },
            [&](const RFreeDecl&) -> NodeContent { return FreeN{}; },
            [&](const RFunApp& x) -> NodeContent {
                std::vector<NodeId> args;
                args.reserve(x.args.size());
                for (const auto& a : x.args) args.push_back(env_lookup(env, a));
                return FunN{x.fn, std::move(args)};
            },
            [&](const RConApp& x) -> NodeContent {
                std::vector<NodeId> args;
                args.reserve(x.args.size());
                for (const auto& a : x.args) args.push_back(env_lookup(env, a));
                return ConN{x.con, std::move(args)};
            },
            [&](const RPartRef& x) -> NodeContent {
                int arity = head_arity(x.head);
                if (arity < 1) throw EngineError("partial reference to nullary " + x.head);
                return PartN{x.head, arity, {}};
            },
            [&](const RApply& x) -> NodeContent {
                // lazy general application: a built-in `apply` node reduced
                // by the eval-apply dispatch when demanded
                std::vector<NodeId> children{env_lookup(env, x.fn)};
                for (const auto& a : x.args) children.push_back(env_lookup(env, a));
                return FunN{kApplyBuiltin, std::move(children)};
            },
        },
        e);
}

void Machine::alloc_group(const std::vector<std::pair<Name, RExpr>>& bindings, Env& env) {
    // recursive group: allocate placeholders first so bindings can refer to
    // each other, then fill them (fills are not journaled: the nodes did not
    // exist before this call)
    std::vector<NodeId> ids;
    ids.reserve(bindings.size());
    for (const auto& [n, _] : bindings) {
        NodeId id = graph.alloc(BotN{});
        ids.push_back(id);
        env.emplace_back(n, id);
    }
    for (std::size_t i = 0; i < bindings.size(); ++i)
        graph.set(ids[i], rexpr_content(bindings[i].second, env, ids[i]));
}

NodeId Machine::instantiate(const Name& fname, const std::vector<NodeId>& args) {
    const RFuncDef* f = prog_->find_function(fname);
    if (!f) throw EngineError("unknown function: " + fname);
    if (f->params.size() != args.size())
        throw EngineError("arity mismatch applying " + fname + ": got " +
                          std::to_string(args.size()) + ", expected " +
                          std::to_string(f->params.size()));
    if (std::holds_alternative<RCase>(f->body)) {
        // the body is a pending case dispatch over the arguments
        return graph.alloc(FunN{fname, args});
    }
    Env env;
    for (std::size_t i = 0; i < args.size(); ++i) env.emplace_back(f->params[i], args[i]);
    RStmtPtr cur = std::get<RStmtPtr>(f->body);
    while (const auto* let = std::get_if<RLet>(&cur->node)) {
        alloc_group(let->bindings, env);
        cur = let->rest;
    }
    const RExpr& ret = std::get<RReturn>(cur->node).expr;
    if (const auto* v = std::get_if<RVar>(&ret)) {
        // a body returning a bare parameter yields a fresh forwarding node,
        // preserving sharing of the target
        return graph.alloc(FwdN{env_lookup(env, v->name)});
    }
    return graph.alloc(rexpr_content(ret, env, NodeId{}));
}

void Machine::hnf(NodeId n) {
    for (;;) {
        const auto* funp = std::get_if<FunN>(&graph.get(n));
        if (!funp) return;  // fail/lit/con/free/choice/part/fwd are results
        FunN fun = *funp;   // copy: execution below reallocates the node store
        if (fun.fn == kApplyBuiltin) {
            if (fun.args.size() < 2) throw EngineError("malformed apply node");
            std::vector<NodeId> args(fun.args.begin() + 1, fun.args.end());
            apply(fun.args.front(), std::move(args), n);
            continue;
        }
        exec_function(n, fun);
    }
}

void Machine::exec_function(NodeId n, const FunN& app) {
    const RFuncDef* f = prog_->find_function(app.fn);
    if (!f) throw EngineError("unknown function: " + app.fn);
    if (f->params.size() != app.args.size())
        throw EngineError("arity mismatch applying " + app.fn);
    step(Rule::Fun, n);
    Env env;
    env.reserve(f->params.size());
    for (std::size_t i = 0; i < app.args.size(); ++i)
        env.emplace_back(f->params[i], app.args[i]);
    if (const auto* c = std::get_if<RCase>(&f->body)) {
        eval_case(env_lookup(env, c->scrutinee), c->branches, env, n);
        return;
    }
    exec_stmt(std::get<RStmtPtr>(f->body), std::move(env), n);
}

void Machine::exec_stmt(const RStmtPtr& stmt, Env env, NodeId outer) {
    RStmtPtr cur = stmt;
    while (const auto* let = std::get_if<RLet>(&cur->node)) {
        alloc_group(let->bindings, env);
        step(Rule::Let, outer);
        cur = let->rest;
    }
    exec_return(std::get<RReturn>(cur->node).expr, env, outer);
}

void Machine::exec_return(const RExpr& e, const Env& env, NodeId outer) {
    std::visit(overloaded{
                   [&](const RVar& x) {
                       step(Rule::Var, outer);
                       NodeId t = env_lookup(env, x.name);
                       rewrite(outer, FwdN{t});
                   },
                   [&](const RLit& x) {
                       step(Rule::Lit, outer);
                       rewrite(outer, LitN{x.value});
                   },
                   [&](const RBot&) {
                       step(Rule::Bot, outer);
                       rewrite(outer, BotN{});
                   },
                   [&](const RChoice&) {
                       step(Rule::Choice, outer);
                       rewrite(outer, rexpr_content(e, env, outer));
                   },
                   [&](const RFreeDecl&) {
                       step(Rule::Free, outer);
                       rewrite(outer, FreeN{});
                   },
                   [&](const RConApp&) {
                       step(Rule::Con, outer);
                       rewrite(outer, rexpr_content(e, env, outer));
                   },
                   [&](const RFunApp&) {
                       // tail call: the surrounding hnf loop keeps reducing
                       rewrite(outer, rexpr_content(e, env, outer));
                   },
                   [&](const RPartRef&) { rewrite(outer, rexpr_content(e, env, outer)); },
                   [&](const RApply&) {
                       // materialize the dispatch state as a node first:
                       // resumption after backtracking re-traverses through it
                       // to the very nodes whose choices were resolved
                       rewrite(outer, rexpr_content(e, env, outer));
                   },
               },
               e);
}

void Machine::eval_case(NodeId scrutinee, const std::vector<RBranch>& branches, const Env& env,
                        NodeId outer) {
    if (branches.empty()) throw EngineError("case with no branches");
    NodeId s = scrutinee;
    for (;;) {
        const NodeContent& c = graph.get(s);
        if (const auto* fwd = std::get_if<FwdN>(&c)) {
            step(Rule::CaseFwd, s);
            s = fwd->target;
            continue;
        }
        if (std::holds_alternative<BotN>(c)) {
            step(Rule::CaseBot, s);
            rewrite(outer, BotN{});
            return;
        }
        if (const auto* ch = std::get_if<ChoiceN>(&c)) {
            step(Rule::CaseChoice, s);
            NodeId left = ch->left, right = ch->right;
            push_choice(s, FwdN{right});
            graph.set(s, FwdN{left});  // the choice frame is the journal entry
            continue;
        }
        if (std::holds_alternative<FunN>(c)) {
            step(Rule::CaseFun, s);
            NodeContent old = c;
            hnf(s);
            stack.push(Frame{s, std::move(old), false});
            continue;
        }
        if (const auto* lit = std::get_if<LitN>(&c)) {
            const RBranch* hit = nullptr;
            for (const auto& br : branches)
                if (const auto* lp = std::get_if<LitPat>(&br.pat))
                    if (lp->value == lit->value) {
                        hit = &br;
                        break;
                    }
            if (!hit) {  // incomplete case: the attempt fails
                rewrite(outer, BotN{});
                return;
            }
            step(Rule::CaseLit, s);
            exec_stmt(hit->body, env, outer);
            return;
        }
        if (const auto* con = std::get_if<ConN>(&c)) {
            const RBranch* hit = nullptr;
            for (const auto& br : branches)
                if (const auto* cp = std::get_if<ConPat>(&br.pat))
                    if (cp->con == con->con) {
                        hit = &br;
                        break;
                    }
            if (!hit) {
                rewrite(outer, BotN{});
                return;
            }
            step(Rule::CaseCon, s);
            const auto& cp = std::get<ConPat>(hit->pat);
            if (cp.vars.size() != con->args.size())
                throw EngineError("pattern arity mismatch for " + con->con);
            Env env2 = env;
            for (std::size_t i = 0; i < cp.vars.size(); ++i)
                env2.emplace_back(cp.vars[i], con->args[i]);
            exec_stmt(hit->body, std::move(env2), outer);
            return;
        }
        if (std::holds_alternative<FreeN>(c)) {
            // narrowing: instantiate to the first branch's pattern; the
            // remaining alternatives become choice frames, and a final
            // deterministic frame restores the free variable on exhaustion
            bool literal_branches = std::holds_alternative<LitPat>(branches.front().pat);
            step(literal_branches ? Rule::CaseLitFree : Rule::CaseConFree, s);
            stack.push(Frame{s, FreeN{}, false});
            auto instance = [&](const Pattern& pat) -> NodeContent {
                if (const auto* lp = std::get_if<LitPat>(&pat)) return LitN{lp->value};
                const auto& cp = std::get<ConPat>(pat);
                std::vector<NodeId> children;
                children.reserve(cp.vars.size());
                for (std::size_t i = 0; i < cp.vars.size(); ++i)
                    children.push_back(graph.alloc(FreeN{}));
                return ConN{cp.con, std::move(children)};
            };
            for (std::size_t i = branches.size(); i-- > 1;)
                push_choice(s, instance(branches[i].pat));
            graph.set(s, instance(branches.front().pat));
            continue;
        }
        throw EngineError("case on a partial application (ill-typed program)");
    }
}

void Machine::apply(NodeId fn, std::vector<NodeId> args, NodeId outer) {
    if (args.empty()) throw EngineError("apply needs at least one argument");
    for (;;) {
        const NodeContent& c = graph.get(fn);
        if (const auto* fwd = std::get_if<FwdN>(&c)) {
            fn = fwd->target;
            continue;
        }
        if (std::holds_alternative<FunN>(c)) {
            NodeContent old = c;
            hnf(fn);
            stack.push(Frame{fn, std::move(old), false});
            continue;
        }
        if (std::holds_alternative<BotN>(c)) {
            rewrite(outer, BotN{});
            return;
        }
        if (std::holds_alternative<FreeN>(c)) {
            step(Rule::ApplyFree, fn);
            rewrite(outer, BotN{});
            return;
        }
        if (const auto* ch = std::get_if<ChoiceN>(&c)) {
            step(Rule::ApplyChoice, fn);
            NodeId left = ch->left, right = ch->right;
            push_choice(fn, FwdN{right});
            graph.set(fn, FwdN{left});
            continue;
        }
        if (const auto* part = std::get_if<PartN>(&c)) {
            int missing = part->missing;
            int n = static_cast<int>(args.size());
            if (n < missing) {
                step(Rule::ApplyUnder, fn);
                std::vector<NodeId> supplied = part->supplied;
                supplied.insert(supplied.end(), args.begin(), args.end());
                rewrite(outer, PartN{part->head, missing - n, std::move(supplied)});
                return;
            }
            if (n == missing) {
                step(Rule::ApplyFull, fn);
                std::vector<NodeId> full = part->supplied;
                full.insert(full.end(), args.begin(), args.end());
                rewrite(outer, saturated(part->head, std::move(full)));
                return;  // the surrounding hnf loop reduces the application
            }
            // over-applied: saturate with the first `missing` arguments and
            // materialize the residual application, so the split survives
            // backtracking; the surrounding hnf loop dispatches it
            step(Rule::ApplyOver, fn);
            std::vector<NodeId> full = part->supplied;
            full.insert(full.end(), args.begin(), args.begin() + missing);
            NodeId t = graph.alloc(saturated(part->head, std::move(full)));
            std::vector<NodeId> chain{t};
            chain.insert(chain.end(), args.begin() + missing, args.end());
            rewrite(outer, FunN{kApplyBuiltin, std::move(chain)});
            return;
        }
        throw EngineError("applying a non-functional value (" + content_label(c) + ")");
    }
}

bool Machine::norm_node(NodeId n) {
    NodeId k = n;
    for (;;) {
        k = graph.contract_fwd(k);
        if (std::holds_alternative<FunN>(graph.get(k))) {
            hnf(k);
            k = graph.contract_fwd(k);
            continue;  // hnf may leave a forwarding node to an unreduced target
        }
        const NodeContent& c = graph.get(k);
        if (std::holds_alternative<BotN>(c)) {
            step(Rule::NormBot, k);
            return false;
        }
        if (std::holds_alternative<LitN>(c)) {
            step(Rule::NormLit, k);
            return true;
        }
        if (std::holds_alternative<FreeN>(c)) {
            step(Rule::NormFree, k);
            return true;
        }
        if (const auto* ch = std::get_if<ChoiceN>(&c)) {
            step(Rule::NormChoice, k);
            NodeId left = ch->left, right = ch->right;
            push_choice(k, FwdN{right});
            graph.set(k, FwdN{left});
            continue;
        }
        if (const auto* con = std::get_if<ConN>(&c)) {
            step(Rule::NormCon, k);
            std::vector<NodeId> children = con->args;  // rewrites may invalidate c
            for (NodeId child : children)
                if (!norm_node(child)) return false;
            return true;
        }
        throw EngineError("partial application is not a printable value");
    }
}

Answer Machine::normalize(NodeId root) {
    if (!norm_node(root)) return Answer::failure();
    return Answer::value(extract_term(root));
}

TermPtr Machine::extract_term(NodeId n) const {
    std::map<NodeId, std::string> names;
    std::function<TermPtr(NodeId)> go = [&](NodeId k) -> TermPtr {
        k = graph.contract_fwd(k);
        const NodeContent& c = graph.get(k);
        if (const auto* lit = std::get_if<LitN>(&c)) return make_term(LitT{lit->value});
        if (std::holds_alternative<FreeN>(c)) {
            auto it = names.find(k);
            if (it == names.end())
                it = names.emplace(k, free_var_name(static_cast<int>(names.size()))).first;
            return make_term(FreeT{it->second});
        }
        if (const auto* con = std::get_if<ConN>(&c)) {
            std::vector<TermPtr> args;
            args.reserve(con->args.size());
            for (NodeId a : con->args) args.push_back(go(a));
            return make_term(ConT{con->con, std::move(args)});
        }
        throw EngineError("extracting a term from a non-normal node (" + content_label(c) + ")");
    };
    return go(n);
}

std::optional<std::uint64_t> Machine::backtrack() {
    std::uint64_t pops = 0;
    while (!stack.empty()) {
        bool is_choice = stack.top().is_choice;
        step(is_choice ? Rule::BtChoice : Rule::Bt, stack.top().target);
        backtrack_step(graph, stack);
        ++pops;
        if (is_choice) return pops;
    }
    return std::nullopt;
}

RunResult run_machine(Machine& m, const std::function<void(const Machine&)>& on_answer) {
    NodeId root = m.graph.root;
    Limits limits = m.limits;
    RunResult res;
    std::uint64_t values = 0;
    std::uint64_t frames = 0;
    for (;;) {
        try {
            Answer a = m.normalize(root);
            a.frames_consumed = frames;
            if (a.is_value()) ++values;
            res.answers.push_back(std::move(a));
            if (on_answer) on_answer(m);
            if (limits.max_answers != 0 && values >= limits.max_answers) break;
            auto popped = m.backtrack();
            if (!popped) break;
            frames = *popped;
        } catch (const BudgetExhausted&) {
            res.truncated = true;
            res.truncation_reason = "step budget exhausted";
            break;
        }
    }
    return res;
}

RunResult run_main(const RProgram& p, Limits limits, TraceFn trace,
                   const std::function<void(const Machine&)>& on_answer) {
    Machine m(p, limits);
    m.trace = std::move(trace);
    m.make_root();
    return run_machine(m, on_answer);
}

}  // namespace fcvm
