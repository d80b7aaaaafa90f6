#include "fcvm/validate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Checker {
    const Program& p;
    ValidationReport& report;

    void diag(const SourceLocation& loc, std::string rule, std::string msg) {
        report.diagnostics.push_back(Diagnostic{loc, std::move(rule), std::move(msg)});
    }

    static bool distinct(const std::vector<Name>& ns) {
        std::set<Name> s(ns.begin(), ns.end());
        return s.size() == ns.size();
    }

    void check_pattern(const Pattern& pat, const SourceLocation& loc) {
        if (const auto* cp = std::get_if<ConPat>(&pat)) {
            if (!distinct(cp->vars))
                diag(loc, "pattern-vars-distinct",
                     "pattern variables of constructor " + cp->con + " are not pairwise distinct");
            const auto* info = p.find_constructor(cp->con);
            if (!info) {
                diag(loc, "undeclared-constructor",
                     "constructor " + cp->con + " in pattern is not declared");
            } else if (static_cast<int>(cp->vars.size()) != info->arity) {
                diag(loc, "pattern-arity",
                     "pattern " + cp->con + " has " + std::to_string(cp->vars.size()) +
                         " variables, declared arity is " + std::to_string(info->arity));
            }
        }
    }

    void check_branch_shape(const CaseE& c, const SourceLocation& loc) {
        if (c.branches.empty()) {
            diag(loc, "empty-case", "case expression has no branches");
            return;
        }
        bool all_con = true, all_lit = true;
        for (const auto& br : c.branches) {
            if (std::holds_alternative<ConPat>(br.pat)) all_lit = false;
            if (std::holds_alternative<LitPat>(br.pat)) all_con = false;
        }
        if (!all_con && !all_lit) {
            diag(loc, "mixed-patterns", "case mixes constructor and literal patterns");
            return;
        }
        if (all_lit) {
            std::set<std::int64_t> seen;
            for (const auto& br : c.branches) {
                auto v = std::get<LitPat>(br.pat).value;
                if (!seen.insert(v).second)
                    diag(loc, "duplicate-pattern",
                         "duplicate literal pattern " + std::to_string(v));
            }
            return;
        }
        std::set<Name> seen;
        const Name* type_name = nullptr;
        for (const auto& br : c.branches) {
            const auto& cp = std::get<ConPat>(br.pat);
            if (!seen.insert(cp.con).second)
                diag(loc, "duplicate-pattern", "duplicate constructor pattern " + cp.con);
            if (const auto* info = p.find_constructor(cp.con)) {
                if (type_name && *type_name != info->type_name)
                    diag(loc, "pattern-types",
                         "case branches span data types " + *type_name + " and " +
                             info->type_name);
                type_name = &info->type_name;
            }
        }
    }

    void check_expr(const ExprPtr& e, std::vector<Name>& scope) {
        auto in_scope = [&](const Name& n) {
            return std::find(scope.begin(), scope.end(), n) != scope.end();
        };
        std::visit(
            overloaded{
                [&](const VarE& x) {
                    if (!in_scope(x.name))
                        diag(e->loc, "unbound-variable", "variable " + x.name + " is not bound");
                },
                [&](const LitE&) {},
                [&](const BotE&) {},
                [&](const ChoiceE& x) {
                    check_expr(x.left, scope);
                    check_expr(x.right, scope);
                },
                [&](const FunAppE& x) {
                    const auto* f = p.find_function(x.fn);
                    if (!f && x.fn != kApplyBuiltin) {
                        diag(e->loc, "undefined-function",
                             "function " + x.fn + " is not defined");
                    } else if (f && f->params.size() != x.args.size()) {
                        diag(e->loc, "function-arity",
                             "function " + x.fn + " applied to " +
                                 std::to_string(x.args.size()) + " arguments, declared arity is " +
                                 std::to_string(f->params.size()));
                    }
                    for (const auto& a : x.args) check_expr(a, scope);
                },
                [&](const ConAppE& x) {
                    const auto* info = p.find_constructor(x.con);
                    if (!info) {
                        diag(e->loc, "undeclared-constructor",
                             "constructor " + x.con + " is not declared");
                    } else if (static_cast<int>(x.args.size()) != info->arity) {
                        diag(e->loc, "constructor-arity",
                             "constructor " + x.con + " applied to " +
                                 std::to_string(x.args.size()) + " arguments, declared arity is " +
                                 std::to_string(info->arity));
                    }
                    for (const auto& a : x.args) check_expr(a, scope);
                },
                [&](const PartRefE& x) {
                    const auto* f = p.find_function(x.head);
                    const auto* c = p.find_constructor(x.head);
                    if (!f && !c) {
                        diag(e->loc, "unknown-partial-head",
                             "partial application head " + x.head + " is not defined");
                    } else {
                        int arity = f ? static_cast<int>(f->params.size()) : c->arity;
                        if (arity < 1)
                            diag(e->loc, "partial-arity",
                                 "partial reference to nullary symbol " + x.head);
                    }
                },
                [&](const LetE& x) {
                    std::vector<Name> names;
                    for (const auto& [n, _] : x.bindings) names.push_back(n);
                    if (!distinct(names))
                        diag(e->loc, "let-names-distinct",
                             "let binding names are not pairwise distinct");
                    std::size_t mark = scope.size();
                    for (const auto& n : names) scope.push_back(n);
                    for (const auto& [_, rhs] : x.bindings) check_expr(rhs, scope);
                    check_expr(x.body, scope);
                    scope.resize(mark);
                },
                [&](const FreeE& x) {
                    if (!distinct(x.names))
                        diag(e->loc, "free-names-distinct",
                             "free variable names are not pairwise distinct");
                    std::size_t mark = scope.size();
                    for (const auto& n : x.names) scope.push_back(n);
                    check_expr(x.body, scope);
                    scope.resize(mark);
                },
                [&](const CaseE& x) {
                    check_branch_shape(x, e->loc);
                    check_expr(x.scrutinee, scope);
                    for (const auto& br : x.branches) {
                        check_pattern(br.pat, e->loc);
                        std::size_t mark = scope.size();
                        if (const auto* cp = std::get_if<ConPat>(&br.pat))
                            for (const auto& v : cp->vars) scope.push_back(v);
                        check_expr(br.body, scope);
                        scope.resize(mark);
                    }
                },
                [&](const ApplyE& x) {
                    if (x.args.empty())
                        diag(e->loc, "apply-no-args", "apply needs at least one argument");
                    check_expr(x.fn, scope);
                    for (const auto& a : x.args) check_expr(a, scope);
                },
            },
            e->node);
    }
};

}  // namespace

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& d : diagnostics)
        os << d.loc.to_string() << ": [" << d.rule << "] " << d.message << "\n";
    return os.str();
}

ValidationReport validate_program(const Program& p) {
    ValidationReport report;
    Checker ck{p, report};

    std::set<Name> type_names;
    std::set<Name> con_names;
    for (const auto& d : p.data_decls) {
        if (!type_names.insert(d.type_name).second)
            ck.diag(d.loc, "duplicate-type", "data type " + d.type_name + " declared twice");
        for (const auto& c : d.constructors) {
            if (!con_names.insert(c.name).second)
                ck.diag(d.loc, "duplicate-constructor",
                        "constructor " + c.name + " declared twice");
            if (c.arity < 0)
                ck.diag(d.loc, "negative-arity", "constructor " + c.name + " has negative arity");
        }
    }

    std::set<Name> fn_names;
    for (const auto& f : p.functions) {
        if (!fn_names.insert(f.name).second)
            ck.diag(f.loc, "duplicate-function", "function " + f.name + " defined twice");
        if (con_names.count(f.name))
            ck.diag(f.loc, "function-constructor-clash",
                    f.name + " is both a function and a constructor");
        if (!Checker::distinct(f.params))
            ck.diag(f.loc, "params-distinct",
                    "parameters of " + f.name + " are not pairwise distinct");
        std::vector<Name> scope = f.params;
        ck.check_expr(f.body, scope);
    }

    const auto* entry = p.find_function(p.entry);
    if (!entry)
        ck.diag({}, "undefined-entry", "entry function " + p.entry + " is not defined");
    else if (!entry->params.empty())
        ck.diag(entry->loc, "entry-arity", "entry function " + p.entry + " must have arity 0");

    return report;
}

namespace {

// Restricted-form checks on the Program embedding. The shape rules mirror the
// block/statement/expression grammar of the restricted language.
struct RestrictedChecker {
    const Program& p;
    ValidationReport& report;

    void diag(const SourceLocation& loc, std::string rule, std::string msg) {
        report.diagnostics.push_back(Diagnostic{loc, std::move(rule), std::move(msg)});
    }

    bool is_var(const ExprPtr& e) const { return std::holds_alternative<VarE>(e->node); }

    void require_var_args(const std::vector<ExprPtr>& args, const SourceLocation& loc,
                          const char* what) {
        for (const auto& a : args)
            if (!is_var(a))
                diag(loc, "non-variable-argument",
                     std::string(what) + " argument is not a variable");
    }

    // expression level: no nested lets, no cases, variable-only arguments
    void check_rexpr(const ExprPtr& e) {
        std::visit(
            overloaded{
                [&](const VarE&) {}, [&](const LitE&) {}, [&](const BotE&) {},
                [&](const PartRefE&) {},
                [&](const ChoiceE& x) {
                    if (!is_var(x.left) || !is_var(x.right))
                        diag(e->loc, "non-variable-argument", "choice argument is not a variable");
                },
                [&](const FunAppE& x) { require_var_args(x.args, e->loc, "function"); },
                [&](const ConAppE& x) { require_var_args(x.args, e->loc, "constructor"); },
                [&](const ApplyE& x) {
                    if (!is_var(x.fn))
                        diag(e->loc, "non-variable-argument", "apply head is not a variable");
                    require_var_args(x.args, e->loc, "apply");
                },
                [&](const LetE&) { diag(e->loc, "nested-let", "let in expression position"); },
                [&](const FreeE&) {
                    diag(e->loc, "nested-free", "free declaration in expression position");
                },
                [&](const CaseE&) {
                    diag(e->loc, "nested-case", "case in expression position must be lifted");
                },
            },
            e->node);
    }

    // statement level: a chain of let groups ending in a return expression
    void check_stmt(const ExprPtr& e) {
        std::visit(
            overloaded{
                [&](const LetE& x) {
                    for (const auto& [_, rhs] : x.bindings) check_rexpr(rhs);
                    check_stmt(x.body);
                },
                [&](const FreeE& x) { check_stmt(x.body); },
                [&](const CaseE&) {
                    diag(e->loc, "multiple-cases",
                         "case in statement position; at most one outermost case is allowed");
                },
                [&](const auto&) { check_rexpr(e); },
            },
            e->node);
    }

    void check_function(const FuncDef& f) {
        if (const auto* c = std::get_if<CaseE>(&f.body->node)) {
            if (!is_var(c->scrutinee))
                diag(f.body->loc, "non-variable-scrutinee",
                     "case scrutinee in " + f.name + " is not a variable");
            for (const auto& br : c->branches) check_stmt(br.body);
        } else {
            check_stmt(f.body);
        }
    }
};

}  // namespace

ValidationReport validate_restricted(const Program& p) {
    ValidationReport report = validate_program(p);
    RestrictedChecker rck{p, report};
    for (const auto& f : p.functions) rck.check_function(f);
    return report;
}

ValidationReport validate_restricted(const RProgram& p) {
    return validate_restricted(embed_program(p));
}

std::vector<ConstructorDecl> constructor_siblings(const Program& p, const Name& con) {
    const auto* info = p.find_constructor(con);
    if (!info) throw UnknownConstructorError("unknown constructor: " + con);
    for (const auto& d : p.data_decls)
        if (d.type_name == info->type_name) return d.constructors;
    throw UnknownConstructorError("unknown constructor: " + con);
}

std::vector<ConstructorDecl> constructor_siblings(const RProgram& p, const Name& con) {
    const auto* info = p.find_constructor(con);
    if (!info) throw UnknownConstructorError("unknown constructor: " + con);
    for (const auto& d : p.data_decls)
        if (d.type_name == info->type_name) return d.constructors;
    throw UnknownConstructorError("unknown constructor: " + con);
}

}  // namespace fcvm
