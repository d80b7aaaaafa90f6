#include "fcvm/rast.hpp"

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<ExprPtr> embed_vars(const std::vector<Name>& vs) {
    std::vector<ExprPtr> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(make_expr(VarE{v}));
    return out;
}

}  // namespace

ExprPtr embed_rexpr(const RExpr& e) {
    return std::visit(
        overloaded{
            [&](const RVar& x) { return make_expr(VarE{x.name}); },
            [&](const RLit& x) { return make_expr(LitE{x.value}); },
            [&](const RBot&) { return make_expr(BotE{}); },
            [&](const RChoice& x) {
                return make_expr(ChoiceE{make_expr(VarE{x.left}), make_expr(VarE{x.right})});
            },
            [&](const RFreeDecl&) -> ExprPtr {
                // A bare `free` return has no direct counterpart; wrap it in a
                // free declaration over a fresh body variable.
                Name t = "free#v";
                return make_expr(FreeE{{t}, make_expr(VarE{t})});
            },
            [&](const RFunApp& x) { return make_expr(FunAppE{x.fn, embed_vars(x.args)}); },
            [&](const RConApp& x) { return make_expr(ConAppE{x.con, embed_vars(x.args)}); },
            [&](const RPartRef& x) { return make_expr(PartRefE{x.head}); },
            [&](const RApply& x) {
                return make_expr(ApplyE{make_expr(VarE{x.fn}), embed_vars(x.args)});
            },
        },
        e);
}

ExprPtr embed_stmt(const RStmtPtr& s) {
    return std::visit(
        overloaded{
            [&](const RLet& let) -> ExprPtr {
                ExprPtr rest = embed_stmt(let.rest);
                // Peel free declarations into `free` groups, keeping the
                // remaining bindings as one let group.
                std::vector<Name> frees;
                std::vector<std::pair<Name, ExprPtr>> binds;
                for (const auto& [n, rhs] : let.bindings) {
                    if (std::holds_alternative<RFreeDecl>(rhs))
                        frees.push_back(n);
                    else
                        binds.emplace_back(n, embed_rexpr(rhs));
                }
                ExprPtr body = binds.empty() ? rest : make_expr(LetE{std::move(binds), rest});
                if (!frees.empty()) body = make_expr(FreeE{std::move(frees), body});
                return body;
            },
            [&](const RReturn& ret) { return embed_rexpr(ret.expr); },
        },
        s->node);
}

ExprPtr embed_block(const RBlock& b) {
    return std::visit(
        overloaded{
            [&](const RCase& c) {
                std::vector<Branch> branches;
                branches.reserve(c.branches.size());
                for (const auto& br : c.branches)
                    branches.push_back(Branch{br.pat, embed_stmt(br.body)});
                return make_expr(CaseE{make_expr(VarE{c.scrutinee}), std::move(branches)});
            },
            [&](const RStmtPtr& s) { return embed_stmt(s); },
        },
        b);
}

Program embed_program(const RProgram& p) {
    Program out;
    out.data_decls = p.data_decls;
    out.entry = p.entry;
    for (const auto& f : p.functions)
        out.functions.push_back(FuncDef{f.name, f.params, embed_block(f.body), f.loc});
    out.rebuild_tables();
    return out;
}

bool equal(const RExpr& a, const RExpr& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        overloaded{
            [&](const RVar& x) { return x.name == std::get<RVar>(b).name; },
            [&](const RLit& x) { return x.value == std::get<RLit>(b).value; },
            [&](const RBot&) { return true; },
            [&](const RChoice& x) {
                const auto& y = std::get<RChoice>(b);
                return x.left == y.left && x.right == y.right;
            },
            [&](const RFreeDecl&) { return true; },
            [&](const RFunApp& x) {
                const auto& y = std::get<RFunApp>(b);
                return x.fn == y.fn && x.args == y.args;
            },
            [&](const RConApp& x) {
                const auto& y = std::get<RConApp>(b);
                return x.con == y.con && x.args == y.args;
            },
            [&](const RPartRef& x) { return x.head == std::get<RPartRef>(b).head; },
            [&](const RApply& x) {
                const auto& y = std::get<RApply>(b);
                return x.fn == y.fn && x.args == y.args;
            },
        },
        a);
}

bool equal(const RStmtPtr& a, const RStmtPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* la = std::get_if<RLet>(&a->node)) {
        const auto& lb = std::get<RLet>(b->node);
        if (la->bindings.size() != lb.bindings.size()) return false;
        for (std::size_t i = 0; i < la->bindings.size(); ++i) {
            if (la->bindings[i].first != lb.bindings[i].first) return false;
            if (!equal(la->bindings[i].second, lb.bindings[i].second)) return false;
        }
        return equal(la->rest, lb.rest);
    }
    return equal(std::get<RReturn>(a->node).expr, std::get<RReturn>(b->node).expr);
}

bool equal(const RBlock& a, const RBlock& b) {
    if (a.index() != b.index()) return false;
    if (const auto* ca = std::get_if<RCase>(&a)) {
        const auto& cb = std::get<RCase>(b);
        if (ca->scrutinee != cb.scrutinee) return false;
        if (ca->branches.size() != cb.branches.size()) return false;
        for (std::size_t i = 0; i < ca->branches.size(); ++i) {
            if (!equal(ca->branches[i].pat, cb.branches[i].pat)) return false;
            if (!equal(ca->branches[i].body, cb.branches[i].body)) return false;
        }
        return true;
    }
    return equal(std::get<RStmtPtr>(a), std::get<RStmtPtr>(b));
}

}  // namespace fcvm
