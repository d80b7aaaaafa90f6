#include "fcvm/oracle.hpp"

#include <algorithm>
#include <functional>

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct OracleBudget {};

constexpr int kMaxDerivationDepth = 8000;

using Heap = std::map<Name, ExprPtr>;
using Subst = std::map<Name, Name>;

struct NatInterp {
    const Program& p;
    std::uint64_t budget;
    std::uint64_t steps = 0;
    int fresh_counter = 0;
    OracleStats* stats;
    std::vector<bool> path;
    int depth = 0;

    struct DepthGuard {
        NatInterp& interp;
        explicit DepthGuard(NatInterp& i) : interp(i) {
            if (++interp.depth > kMaxDerivationDepth) throw OracleBudget{};
        }
        ~DepthGuard() { --interp.depth; }
    };

    Name fresh() { return "%" + std::to_string(++fresh_counter); }

    void bump() {
        if (++steps > budget) throw OracleBudget{};
    }
    void count(std::uint64_t OracleStats::* field) {
        if (stats) ++(stats->*field);
    }

    // Instantiation renaming: substitutes the given variables and freshens
    // every binder, so heap names stay globally unique and substitution can
    // never capture.
    ExprPtr rename(const ExprPtr& e, const Subst& sub) {
        return std::visit(
            overloaded{
                [&](const VarE& x) -> ExprPtr {
                    auto it = sub.find(x.name);
                    return it == sub.end() ? e : make_expr(VarE{it->second}, e->loc);
                },
                [&](const LitE&) { return e; },
                [&](const BotE&) { return e; },
                [&](const PartRefE&) { return e; },
                [&](const ChoiceE& x) -> ExprPtr {
                    return make_expr(ChoiceE{rename(x.left, sub), rename(x.right, sub)}, e->loc);
                },
                [&](const FunAppE& x) -> ExprPtr {
                    std::vector<ExprPtr> args;
                    args.reserve(x.args.size());
                    for (const auto& a : x.args) args.push_back(rename(a, sub));
                    return make_expr(FunAppE{x.fn, std::move(args)}, e->loc);
                },
                [&](const ConAppE& x) -> ExprPtr {
                    std::vector<ExprPtr> args;
                    args.reserve(x.args.size());
                    for (const auto& a : x.args) args.push_back(rename(a, sub));
                    return make_expr(ConAppE{x.con, std::move(args)}, e->loc);
                },
                [&](const ApplyE& x) -> ExprPtr {
                    std::vector<ExprPtr> args;
                    args.reserve(x.args.size());
                    for (const auto& a : x.args) args.push_back(rename(a, sub));
                    return make_expr(ApplyE{rename(x.fn, sub), std::move(args)}, e->loc);
                },
                [&](const LetE& x) -> ExprPtr {
                    Subst sub2 = sub;
                    std::vector<std::pair<Name, ExprPtr>> bindings;
                    bindings.reserve(x.bindings.size());
                    for (const auto& [n, _] : x.bindings) sub2[n] = fresh();
                    for (const auto& [n, rhs] : x.bindings)
                        bindings.emplace_back(sub2.at(n), rename(rhs, sub2));
                    return make_expr(LetE{std::move(bindings), rename(x.body, sub2)}, e->loc);
                },
                [&](const FreeE& x) -> ExprPtr {
                    Subst sub2 = sub;
                    std::vector<Name> names;
                    names.reserve(x.names.size());
                    for (const auto& n : x.names) {
                        sub2[n] = fresh();
                        names.push_back(sub2.at(n));
                    }
                    return make_expr(FreeE{std::move(names), rename(x.body, sub2)}, e->loc);
                },
                [&](const CaseE& x) -> ExprPtr {
                    std::vector<Branch> branches;
                    branches.reserve(x.branches.size());
                    for (const auto& br : x.branches) {
                        if (const auto* cp = std::get_if<ConPat>(&br.pat)) {
                            Subst sub2 = sub;
                            std::vector<Name> vars;
                            vars.reserve(cp->vars.size());
                            for (const auto& v : cp->vars) {
                                sub2[v] = fresh();
                                vars.push_back(sub2.at(v));
                            }
                            branches.push_back(
                                Branch{ConPat{cp->con, std::move(vars)}, rename(br.body, sub2)});
                        } else {
                            branches.push_back(Branch{br.pat, rename(br.body, sub)});
                        }
                    }
                    return make_expr(CaseE{rename(x.scrutinee, sub), std::move(branches)},
                                     e->loc);
                },
            },
            e->node);
    }

    static bool is_self_map(const Heap& h, const Name& x) {
        auto it = h.find(x);
        if (it == h.end()) return false;
        const auto* v = std::get_if<VarE>(&it->second->node);
        return v && v->name == x;
    }

    // Head normal values are literals, constructors over variables, and
    // logic variables.
    static bool is_flat_hnf(const ExprPtr& e) {
        if (std::holds_alternative<LitE>(e->node)) return true;
        if (const auto* c = std::get_if<ConAppE>(&e->node)) {
            return std::all_of(c->args.begin(), c->args.end(), [](const ExprPtr& a) {
                return std::holds_alternative<VarE>(a->node);
            });
        }
        return false;
    }

    // Binds an argument expression to a variable name, reusing variables
    // as-is so sharing flows through the heap.
    Name bind_arg(Heap& h, const ExprPtr& arg) {
        if (const auto* v = std::get_if<VarE>(&arg->node)) return v->name;
        Name n = fresh();
        h.emplace(n, arg);
        return n;
    }

    using Cont = std::function<void(Heap, ExprPtr)>;

    void hnf(Heap h, ExprPtr e, const Cont& k) {
        bump();
        DepthGuard guard(*this);
        std::visit(
            overloaded{
                [&](const LitE&) {
                    count(&OracleStats::nat_val);
                    k(std::move(h), e);
                },
                [&](const BotE&) { /* no rule: this derivation yields nothing */ },
                [&](const VarE& x) {
                    auto it = h.find(x.name);
                    if (it == h.end())
                        throw OracleError("unbound variable in oracle heap: " + x.name);
                    if (is_self_map(h, x.name)) {
                        count(&OracleStats::nat_var_cons);
                        k(std::move(h), e);  // a logic variable is a value
                        return;
                    }
                    if (is_flat_hnf(it->second)) {
                        count(&OracleStats::nat_var_cons);
                        ExprPtr v = it->second;
                        k(std::move(h), v);
                        return;
                    }
                    count(&OracleStats::nat_var_exp);
                    ExprPtr bound = it->second;
                    Name name = x.name;
                    hnf(std::move(h), bound, [this, name, &k](Heap h2, ExprPtr v) {
                        h2[name] = v;  // evaluation is shared through the heap
                        k(std::move(h2), v);
                    });
                },
                [&](const ChoiceE& x) {
                    count(&OracleStats::nat_or);
                    Heap left = h;
                    path.push_back(false);
                    hnf(std::move(left), x.left, k);
                    path.back() = true;
                    hnf(std::move(h), x.right, k);
                    path.pop_back();
                },
                [&](const ConAppE& x) {
                    count(&OracleStats::nat_val);
                    if (is_flat_hnf(e)) {
                        k(std::move(h), e);
                        return;
                    }
                    // flatten children into the heap so selection keeps
                    // sharing
                    std::vector<ExprPtr> args;
                    args.reserve(x.args.size());
                    for (const auto& a : x.args) args.push_back(make_expr(VarE{bind_arg(h, a)}));
                    k(std::move(h), make_expr(ConAppE{x.con, std::move(args)}, e->loc));
                },
                [&](const FunAppE& x) {
                    const FuncDef* f = p.find_function(x.fn);
                    if (!f) throw OracleError("unknown function: " + x.fn);
                    if (f->params.size() != x.args.size())
                        throw OracleError("arity mismatch applying " + x.fn);
                    count(&OracleStats::nat_fun);
                    Subst sub;
                    for (std::size_t i = 0; i < x.args.size(); ++i)
                        sub[f->params[i]] = bind_arg(h, x.args[i]);
                    hnf(std::move(h), rename(f->body, sub), k);
                },
                [&](const LetE& x) {
                    count(&OracleStats::nat_let);
                    for (const auto& [n, rhs] : x.bindings) h[n] = rhs;
                    hnf(std::move(h), x.body, k);
                },
                [&](const FreeE& x) {
                    count(&OracleStats::nat_let);
                    for (const auto& n : x.names) h[n] = make_expr(VarE{n});
                    hnf(std::move(h), x.body, k);
                },
                [&](const CaseE& x) {
                    hnf(std::move(h), x.scrutinee,
                        [this, &x, &k](Heap h2, ExprPtr v) { select(std::move(h2), x, v, k); });
                },
                [&](const PartRefE&) {
                    throw OracleError(
                        "higher-order program: the reference interpreter is first-order");
                },
                [&](const ApplyE&) {
                    throw OracleError(
                        "higher-order program: the reference interpreter is first-order");
                },
            },
            e->node);
    }

    void select(Heap h, const CaseE& c, const ExprPtr& value, const Cont& k) {
        if (const auto* lit = std::get_if<LitE>(&value->node)) {
            for (const auto& br : c.branches) {
                if (const auto* lp = std::get_if<LitPat>(&br.pat)) {
                    if (lp->value == lit->value) {
                        count(&OracleStats::nat_select);
                        hnf(std::move(h), br.body, k);
                        return;
                    }
                }
            }
            return;  // no matching branch: the derivation yields nothing
        }
        if (const auto* con = std::get_if<ConAppE>(&value->node)) {
            for (const auto& br : c.branches) {
                if (const auto* cp = std::get_if<ConPat>(&br.pat)) {
                    if (cp->con == con->con) {
                        count(&OracleStats::nat_select);
                        if (cp->vars.size() != con->args.size())
                            throw OracleError("pattern arity mismatch for " + cp->con);
                        Subst sub;
                        for (std::size_t i = 0; i < cp->vars.size(); ++i)
                            sub[cp->vars[i]] = std::get<VarE>(con->args[i]->node).name;
                        hnf(std::move(h), rename(br.body, sub), k);
                        return;
                    }
                }
            }
            return;
        }
        // a logic variable: guess each branch's pattern in branch order
        const auto& var = std::get<VarE>(value->node);
        count(&OracleStats::nat_guess);
        for (const auto& br : c.branches) {
            Heap h2 = h;
            Subst sub;
            if (const auto* lp = std::get_if<LitPat>(&br.pat)) {
                h2[var.name] = make_expr(LitE{lp->value});
            } else {
                const auto& cp = std::get<ConPat>(br.pat);
                std::vector<ExprPtr> children;
                children.reserve(cp.vars.size());
                for (const auto& pv : cp.vars) {
                    Name f = fresh();
                    h2[f] = make_expr(VarE{f});  // fresh logic variables
                    children.push_back(make_expr(VarE{f}));
                    sub[pv] = f;
                }
                h2[var.name] = make_expr(ConAppE{cp.con, std::move(children)});
            }
            hnf(std::move(h2), rename(br.body, sub), k);
        }
    }

    // A variable reported free in a value may be instantiated later in the
    // same derivation (a case to its right can narrow it), so answers are
    // resolved against the derivation's final heap.
    TermPtr resolve(const Heap& h, const TermPtr& t, int d) {
        if (d > kMaxDerivationDepth) throw OracleError("cyclic answer");
        if (const auto* c = std::get_if<ConT>(&t->node)) {
            std::vector<TermPtr> args;
            args.reserve(c->args.size());
            for (const auto& a : c->args) args.push_back(resolve(h, a, d + 1));
            return make_term(ConT{c->con, std::move(args)});
        }
        if (const auto* f = std::get_if<FreeT>(&t->node)) return resolve_var(h, f->name, d + 1);
        return t;
    }

    TermPtr resolve_var(const Heap& h, const Name& n, int d) {
        if (d > kMaxDerivationDepth) throw OracleError("cyclic answer");
        auto it = h.find(n);
        if (it == h.end()) return make_term(FreeT{n});
        if (const auto* v = std::get_if<VarE>(&it->second->node)) {
            if (v->name == n) return make_term(FreeT{n});  // still unbound
            return resolve_var(h, v->name, d + 1);
        }
        if (const auto* l = std::get_if<LitE>(&it->second->node))
            return make_term(LitT{l->value});
        if (const auto* c = std::get_if<ConAppE>(&it->second->node)) {
            std::vector<TermPtr> args;
            args.reserve(c->args.size());
            for (const auto& a : c->args) {
                const auto* av = std::get_if<VarE>(&a->node);
                if (!av) throw OracleError("non-flat instantiation reached an answer");
                args.push_back(resolve_var(h, av->name, d + 1));
            }
            return make_term(ConT{c->con, std::move(args)});
        }
        throw OracleError("unevaluated binding reached an answer");
    }

    using NormCont = std::function<void(Heap, TermPtr)>;

    void normalize(Heap h, ExprPtr e, const NormCont& k) {
        hnf(std::move(h), e, [this, &k](Heap h2, ExprPtr v) {
            if (const auto* lit = std::get_if<LitE>(&v->node)) {
                k(std::move(h2), make_term(LitT{lit->value}));
                return;
            }
            if (const auto* var = std::get_if<VarE>(&v->node)) {
                k(std::move(h2), make_term(FreeT{var->name}));
                return;
            }
            const auto& con = std::get<ConAppE>(v->node);
            norm_children(std::move(h2), con.con, con.args, 0, {}, k);
        });
    }

    void norm_children(Heap h, const Name& con, const std::vector<ExprPtr>& children,
                       std::size_t i, std::vector<TermPtr> acc, const NormCont& k) {
        if (i == children.size()) {
            k(std::move(h), make_term(ConT{con, std::move(acc)}));
            return;
        }
        normalize(std::move(h), children[i],
                  [this, &con, &children, i, acc, &k](Heap h2, TermPtr t) {
                      std::vector<TermPtr> acc2 = acc;
                      acc2.push_back(std::move(t));
                      norm_children(std::move(h2), con, children, i + 1, std::move(acc2), k);
                  });
    }
};

}  // namespace

NatHnfResult nat_hnf(const Program& p, NatConfig config, OracleStats* stats) {
    NatInterp interp{p, config.budget, 0, 0, stats, config.path};
    NatHnfResult result;
    try {
        interp.hnf(config.heap.bindings, config.control, [&](Heap h, ExprPtr v) {
            result.values.push_back(NatValue{NatHeap{std::move(h)}, std::move(v), interp.path});
        });
    } catch (const OracleBudget&) {
        result.truncated = true;
    }
    return result;
}

OracleResult oracle_normalize(const Program& p, std::uint64_t budget, OracleStats* stats) {
    const FuncDef* entry = p.find_function(p.entry);
    if (!entry) throw OracleError("entry function " + p.entry + " is not defined");
    if (!entry->params.empty())
        throw OracleError("entry function " + p.entry + " must have arity 0");
    NatInterp interp{p, budget, 0, 0, stats, {}};
    OracleResult result;
    try {
        interp.normalize({}, make_expr(FunAppE{p.entry, {}}), [&](Heap h, TermPtr t) {
            result.answers.push_back(canonicalize_term(interp.resolve(h, t, 0)));
        });
    } catch (const OracleBudget&) {
        result.truncated = true;
    }
    return result;
}

OracleResult oracle_normalize(const RProgram& p, std::uint64_t budget, OracleStats* stats) {
    return oracle_normalize(embed_program(p), budget, stats);
}

TermPtr canonicalize_term(const TermPtr& t) {
    std::map<std::string, std::string> names;
    std::function<TermPtr(const TermPtr&)> go = [&](const TermPtr& term) -> TermPtr {
        if (const auto* c = std::get_if<ConT>(&term->node)) {
            std::vector<TermPtr> args;
            args.reserve(c->args.size());
            for (const auto& a : c->args) args.push_back(go(a));
            return make_term(ConT{c->con, std::move(args)});
        }
        if (const auto* f = std::get_if<FreeT>(&term->node)) {
            auto it = names.find(f->name);
            if (it == names.end())
                it = names.emplace(f->name, free_var_name(static_cast<int>(names.size()))).first;
            return make_term(FreeT{it->second});
        }
        return term;
    };
    return go(t);
}

CompareReport compare_answers(const std::vector<TermPtr>& engine_answers,
                              const std::vector<TermPtr>& oracle_answers, CompareMode mode) {
    auto render = [](const std::vector<TermPtr>& xs) {
        std::vector<std::string> out;
        out.reserve(xs.size());
        for (const auto& t : xs) out.push_back(to_string(canonicalize_term(t)));
        return out;
    };
    std::vector<std::string> a = render(engine_answers);
    std::vector<std::string> b = render(oracle_answers);
    if (mode == CompareMode::Multiset) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
    }
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] != b[i])
            return CompareReport{false, "divergence at index " + std::to_string(i) + ": engine " +
                                            a[i] + " vs oracle " + b[i]};
    }
    if (a.size() != b.size())
        return CompareReport{false, "length mismatch: engine " + std::to_string(a.size()) +
                                        " vs oracle " + std::to_string(b.size())};
    return CompareReport{true, ""};
}

}  // namespace fcvm
