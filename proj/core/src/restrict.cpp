#include "fcvm/restrict.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Bindings = std::vector<std::pair<Name, RExpr>>;
using Renaming = std::map<Name, Name>;

struct Lowerer {
    FreshNamer& namer;
    std::vector<RFuncDef>& acc;

    Name rename(const Renaming& ren, const Name& n) const {
        auto it = ren.find(n);
        return it == ren.end() ? n : it->second;
    }

    // Lowers a function body; auxiliaries are appended to acc.
    RBlock lower_body(const ExprPtr& body, const std::vector<Name>& params) {
        if (const auto* c = std::get_if<CaseE>(&body->node)) {
            if (const auto* v = std::get_if<VarE>(&c->scrutinee->node)) {
                RCase rcase;
                rcase.scrutinee = v->name;
                for (const auto& br : c->branches) {
                    std::set<Name> bound(params.begin(), params.end());
                    if (const auto* cp = std::get_if<ConPat>(&br.pat))
                        for (const auto& pv : cp->vars) bound.insert(pv);
                    rcase.branches.push_back(
                        RBranch{br.pat, lower_stmt(br.body, Renaming{}, bound)});
                }
                return rcase;
            }
            // Non-variable scrutinee: bind it first. The case is then no
            // longer outermost and gets lifted below.
            Name t = namer.fresh_var();
            ExprPtr rebound = make_expr(
                LetE{{{t, c->scrutinee}},
                     make_expr(CaseE{make_expr(VarE{t}), c->branches}, body->loc)},
                body->loc);
            std::set<Name> bound(params.begin(), params.end());
            return lower_stmt(rebound, Renaming{}, bound);
        }
        std::set<Name> bound(params.begin(), params.end());
        return lower_stmt(body, Renaming{}, bound);
    }

    // Statement level: flatten the let/free spine into one binding group,
    // then atomize the return expression.
    RStmtPtr lower_stmt(ExprPtr e, Renaming ren, std::set<Name> bound) {
        Bindings group;
        for (;;) {
            if (const auto* let = std::get_if<LetE>(&e->node)) {
                // binders are visible in their own right-hand sides
                Renaming ren2 = ren;
                for (const auto& [n, _] : let->bindings) {
                    Name fresh = bound.count(n) ? namer.fresh_var() : n;
                    ren2[n] = fresh;
                    bound.insert(fresh);
                }
                for (const auto& [n, rhs] : let->bindings)
                    group.emplace_back(ren2.at(n), atomize(rhs, ren2, bound, group));
                ren = std::move(ren2);
                e = let->body;
                continue;
            }
            if (const auto* fr = std::get_if<FreeE>(&e->node)) {
                Renaming ren2 = ren;
                for (const auto& n : fr->names) {
                    Name fresh = bound.count(n) ? namer.fresh_var() : n;
                    ren2[n] = fresh;
                    bound.insert(fresh);
                    group.emplace_back(fresh, RFreeDecl{});
                }
                ren = std::move(ren2);
                e = fr->body;
                continue;
            }
            break;
        }
        RExpr ret = atomize(e, ren, bound, group);
        RStmtPtr stmt = make_rstmt(RReturn{std::move(ret)});
        if (!group.empty()) stmt = make_rstmt(RLet{std::move(group), std::move(stmt)});
        return stmt;
    }

    // Expression level: every argument becomes a variable; nested lets are
    // hoisted into the current group; cases are lifted out.
    RExpr atomize(const ExprPtr& e, const Renaming& ren, std::set<Name>& bound,
                  Bindings& group) {
        auto atom_var = [&](const ExprPtr& a) -> Name {
            RExpr r = atomize(a, ren, bound, group);
            if (const auto* v = std::get_if<RVar>(&r)) return v->name;
            Name t = namer.fresh_var();
            group.emplace_back(t, std::move(r));
            return t;
        };
        return std::visit(
            overloaded{
                [&](const VarE& x) -> RExpr { return RVar{rename(ren, x.name)}; },
                [&](const LitE& x) -> RExpr { return RLit{x.value}; },
                [&](const BotE&) -> RExpr { return RBot{}; },
                [&](const PartRefE& x) -> RExpr { return RPartRef{x.head}; },
                [&](const ChoiceE& x) -> RExpr {
                    Name l = atom_var(x.left);
                    return RChoice{l, atom_var(x.right)};
                },
                [&](const FunAppE& x) -> RExpr {
                    std::vector<Name> args;
                    args.reserve(x.args.size());
                    for (const auto& a : x.args) args.push_back(atom_var(a));
                    return RFunApp{x.fn, std::move(args)};
                },
                [&](const ConAppE& x) -> RExpr {
                    std::vector<Name> args;
                    args.reserve(x.args.size());
                    for (const auto& a : x.args) args.push_back(atom_var(a));
                    return RConApp{x.con, std::move(args)};
                },
                [&](const ApplyE& x) -> RExpr {
                    Name fn = atom_var(x.fn);
                    std::vector<Name> args;
                    args.reserve(x.args.size());
                    for (const auto& a : x.args) args.push_back(atom_var(a));
                    return RApply{fn, std::move(args)};
                },
                [&](const LetE& x) -> RExpr {
                    Renaming ren2 = ren;
                    for (const auto& [n, _] : x.bindings) {
                        Name fresh = bound.count(n) ? namer.fresh_var() : n;
                        ren2[n] = fresh;
                        bound.insert(fresh);
                    }
                    for (const auto& [n, rhs] : x.bindings)
                        group.emplace_back(ren2.at(n), atomize(rhs, ren2, bound, group));
                    return atomize(x.body, ren2, bound, group);
                },
                [&](const FreeE& x) -> RExpr {
                    Renaming ren2 = ren;
                    for (const auto& n : x.names) {
                        Name fresh = bound.count(n) ? namer.fresh_var() : n;
                        ren2[n] = fresh;
                        bound.insert(fresh);
                        group.emplace_back(fresh, RFreeDecl{});
                    }
                    return atomize(x.body, ren2, bound, group);
                },
                [&](const CaseE&) -> RExpr {
                    // lift: a fresh top-level function over the live variables
                    std::vector<Name> live = free_vars(e);
                    Name aux = namer.fresh_function();
                    std::size_t slot = acc.size();
                    acc.emplace_back();
                    RBlock block = lower_body(e, live);
                    acc[slot] = RFuncDef{aux, live, std::move(block), e->loc};
                    std::vector<Name> args;
                    args.reserve(live.size());
                    for (const auto& v : live) args.push_back(rename(ren, v));
                    return RFunApp{aux, std::move(args)};
                },
            },
            e->node);
    }
};

}  // namespace

std::vector<RFuncDef> lift_cases(const FuncDef& f, FreshNamer& namer) {
    std::vector<RFuncDef> acc;
    Lowerer lowerer{namer, acc};
    std::size_t slot = acc.size();
    acc.emplace_back();
    RBlock block = lowerer.lower_body(f.body, f.params);
    acc[slot] = RFuncDef{f.name, f.params, std::move(block), f.loc};
    return acc;
}

RProgram restrict_program(const Program& p) {
    RProgram out;
    out.data_decls = p.data_decls;
    out.entry = p.entry;
    for (const auto& f : p.functions) {
        FreshNamer namer{f.name};
        std::vector<RFuncDef> defs = lift_cases(f, namer);
        for (auto& d : defs) out.functions.push_back(std::move(d));
    }
    out.rebuild_tables();
    return out;
}

namespace {

bool contains_case(const ExprPtr& e) {
    bool found = false;
    std::visit(overloaded{
                   [&](const CaseE&) { found = true; },
                   [&](const ChoiceE& x) { found = contains_case(x.left) || contains_case(x.right); },
                   [&](const FunAppE& x) {
                       for (const auto& a : x.args) found = found || contains_case(a);
                   },
                   [&](const ConAppE& x) {
                       for (const auto& a : x.args) found = found || contains_case(a);
                   },
                   [&](const ApplyE& x) {
                       found = contains_case(x.fn);
                       for (const auto& a : x.args) found = found || contains_case(a);
                   },
                   [&](const LetE& x) {
                       for (const auto& [_, rhs] : x.bindings)
                           found = found || contains_case(rhs);
                       found = found || contains_case(x.body);
                   },
                   [&](const FreeE& x) { found = contains_case(x.body); },
                   [&](const auto&) {},
               },
               e->node);
    return found;
}

}  // namespace

std::pair<std::vector<std::pair<Name, RExpr>>, RExpr> atomize_expr(const ExprPtr& e,
                                                                   FreshNamer& namer) {
    if (contains_case(e)) throw std::logic_error("atomize_expr: expression contains a case");
    std::vector<RFuncDef> acc;
    Lowerer lowerer{namer, acc};
    Bindings group;
    std::set<Name> bound;
    for (const Name& v : free_vars(e)) bound.insert(v);
    RExpr ret = lowerer.atomize(e, Renaming{}, bound, group);
    return {std::move(group), std::move(ret)};
}

}  // namespace fcvm
