#include "fcvm/ast.hpp"

#include <algorithm>

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool equal_vec(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i])) return false;
    return true;
}

}  // namespace

bool equal(const Pattern& a, const Pattern& b) {
    if (a.index() != b.index()) return false;
    if (const auto* ca = std::get_if<ConPat>(&a)) {
        const auto& cb = std::get<ConPat>(b);
        return ca->con == cb.con && ca->vars == cb.vars;
    }
    return std::get<LitPat>(a).value == std::get<LitPat>(b).value;
}

bool equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const VarE& x) { return x.name == std::get<VarE>(b.node).name; },
            [&](const LitE& x) { return x.value == std::get<LitE>(b.node).value; },
            [&](const BotE&) { return true; },
            [&](const ChoiceE& x) {
                const auto& y = std::get<ChoiceE>(b.node);
                return equal(x.left, y.left) && equal(x.right, y.right);
            },
            [&](const FunAppE& x) {
                const auto& y = std::get<FunAppE>(b.node);
                return x.fn == y.fn && equal_vec(x.args, y.args);
            },
            [&](const ConAppE& x) {
                const auto& y = std::get<ConAppE>(b.node);
                return x.con == y.con && equal_vec(x.args, y.args);
            },
            [&](const PartRefE& x) { return x.head == std::get<PartRefE>(b.node).head; },
            [&](const LetE& x) {
                const auto& y = std::get<LetE>(b.node);
                if (x.bindings.size() != y.bindings.size()) return false;
                for (std::size_t i = 0; i < x.bindings.size(); ++i) {
                    if (x.bindings[i].first != y.bindings[i].first) return false;
                    if (!equal(x.bindings[i].second, y.bindings[i].second)) return false;
                }
                return equal(x.body, y.body);
            },
            [&](const FreeE& x) {
                const auto& y = std::get<FreeE>(b.node);
                return x.names == y.names && equal(x.body, y.body);
            },
            [&](const CaseE& x) {
                const auto& y = std::get<CaseE>(b.node);
                if (!equal(x.scrutinee, y.scrutinee)) return false;
                if (x.branches.size() != y.branches.size()) return false;
                for (std::size_t i = 0; i < x.branches.size(); ++i) {
                    if (!equal(x.branches[i].pat, y.branches[i].pat)) return false;
                    if (!equal(x.branches[i].body, y.branches[i].body)) return false;
                }
                return true;
            },
            [&](const ApplyE& x) {
                const auto& y = std::get<ApplyE>(b.node);
                return equal(x.fn, y.fn) && equal_vec(x.args, y.args);
            },
        },
        a.node);
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return equal(*a, *b);
}

bool equal(const FuncDef& a, const FuncDef& b) {
    return a.name == b.name && a.params == b.params && equal(a.body, b.body);
}

bool equal(const Program& a, const Program& b) {
    if (a.entry != b.entry) return false;
    if (a.data_decls.size() != b.data_decls.size()) return false;
    for (std::size_t i = 0; i < a.data_decls.size(); ++i) {
        const auto& da = a.data_decls[i];
        const auto& db = b.data_decls[i];
        if (da.type_name != db.type_name) return false;
        if (da.constructors.size() != db.constructors.size()) return false;
        for (std::size_t j = 0; j < da.constructors.size(); ++j) {
            if (da.constructors[j].name != db.constructors[j].name) return false;
            if (da.constructors[j].arity != db.constructors[j].arity) return false;
        }
    }
    if (a.functions.size() != b.functions.size()) return false;
    for (std::size_t i = 0; i < a.functions.size(); ++i)
        if (!equal(a.functions[i], b.functions[i])) return false;
    return true;
}

namespace {

void free_vars_rec(const ExprPtr& e, std::vector<Name>& bound, std::vector<Name>& out) {
    auto is_bound = [&](const Name& n) {
        return std::find(bound.begin(), bound.end(), n) != bound.end();
    };
    auto seen = [&](const Name& n) { return std::find(out.begin(), out.end(), n) != out.end(); };
    std::visit(
        overloaded{
            [&](const VarE& x) {
                if (!is_bound(x.name) && !seen(x.name)) out.push_back(x.name);
            },
            [&](const LitE&) {},
            [&](const BotE&) {},
            [&](const ChoiceE& x) {
                free_vars_rec(x.left, bound, out);
                free_vars_rec(x.right, bound, out);
            },
            [&](const FunAppE& x) {
                for (const auto& a : x.args) free_vars_rec(a, bound, out);
            },
            [&](const ConAppE& x) {
                for (const auto& a : x.args) free_vars_rec(a, bound, out);
            },
            [&](const PartRefE&) {},
            [&](const LetE& x) {
                std::size_t mark = bound.size();
                for (const auto& [n, _] : x.bindings) bound.push_back(n);
                for (const auto& [_, rhs] : x.bindings) free_vars_rec(rhs, bound, out);
                free_vars_rec(x.body, bound, out);
                bound.resize(mark);
            },
            [&](const FreeE& x) {
                std::size_t mark = bound.size();
                for (const auto& n : x.names) bound.push_back(n);
                free_vars_rec(x.body, bound, out);
                bound.resize(mark);
            },
            [&](const CaseE& x) {
                free_vars_rec(x.scrutinee, bound, out);
                for (const auto& br : x.branches) {
                    std::size_t mark = bound.size();
                    if (const auto* cp = std::get_if<ConPat>(&br.pat))
                        for (const auto& v : cp->vars) bound.push_back(v);
                    free_vars_rec(br.body, bound, out);
                    bound.resize(mark);
                }
            },
            [&](const ApplyE& x) {
                free_vars_rec(x.fn, bound, out);
                for (const auto& a : x.args) free_vars_rec(a, bound, out);
            },
        },
        e->node);
}

}  // namespace

std::vector<Name> free_vars(const ExprPtr& e) {
    std::vector<Name> bound;
    std::vector<Name> out;
    free_vars_rec(e, bound, out);
    return out;
}

}  // namespace fcvm
