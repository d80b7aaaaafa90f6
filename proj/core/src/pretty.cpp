#include "fcvm/pretty.hpp"

#include <sstream>

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_atomic(const ExprPtr& e) {
    return std::visit(overloaded{
                          [](const VarE&) { return true; },
                          [](const LitE&) { return true; },
                          [](const BotE&) { return true; },
                          [](const PartRefE&) { return true; },
                          [](const FunAppE& x) { return x.args.empty(); },
                          [](const ConAppE& x) { return x.args.empty(); },
                          [](const auto&) { return false; },
                      },
                      e->node);
}

void print_expr(std::ostream& os, const ExprPtr& e);

void print_atom(std::ostream& os, const ExprPtr& e) {
    if (is_atomic(e)) {
        print_expr(os, e);
    } else {
        os << '(';
        print_expr(os, e);
        os << ')';
    }
}

// application level: anything that binds tighter than `?`
void print_app(std::ostream& os, const ExprPtr& e) {
    bool needs_parens = std::visit(overloaded{
                                       [](const ChoiceE&) { return true; },
                                       [](const LetE&) { return true; },
                                       [](const FreeE&) { return true; },
                                       [](const CaseE&) { return true; },
                                       [](const auto&) { return false; },
                                   },
                                   e->node);
    if (needs_parens) {
        os << '(';
        print_expr(os, e);
        os << ')';
    } else {
        print_expr(os, e);
    }
}

void print_expr(std::ostream& os, const ExprPtr& e) {
    std::visit(
        overloaded{
            [&](const VarE& x) { os << x.name; },
            [&](const LitE& x) { os << x.value; },
            [&](const BotE&) { os << "fail"; },
            [&](const ChoiceE& x) {
                print_app(os, x.left);
                os << " ? ";
                print_expr(os, x.right);  // right-associative
            },
            [&](const FunAppE& x) {
                os << x.fn;
                for (const auto& a : x.args) {
                    os << ' ';
                    print_atom(os, a);
                }
            },
            [&](const ConAppE& x) {
                os << x.con;
                for (const auto& a : x.args) {
                    os << ' ';
                    print_atom(os, a);
                }
            },
            [&](const PartRefE& x) { os << x.head; },
            [&](const LetE& x) {
                if (x.bindings.empty()) {  // normalized away
                    print_expr(os, x.body);
                    return;
                }
                os << "let { ";
                bool first = true;
                for (const auto& [n, rhs] : x.bindings) {
                    if (!first) os << "; ";
                    first = false;
                    os << n << " = ";
                    print_expr(os, rhs);
                }
                os << " } in ";
                print_expr(os, x.body);
            },
            [&](const FreeE& x) {
                os << "let ";
                bool first = true;
                for (const auto& n : x.names) {
                    if (!first) os << ", ";
                    first = false;
                    os << n;
                }
                os << " free in ";
                print_expr(os, x.body);
            },
            [&](const CaseE& x) {
                os << "case ";
                print_app(os, x.scrutinee);
                os << " of { ";
                bool first = true;
                for (const auto& br : x.branches) {
                    if (!first) os << "; ";
                    first = false;
                    os << pretty_pattern(br.pat) << " -> ";
                    print_expr(os, br.body);
                }
                os << " }";
            },
            [&](const ApplyE& x) {
                os << "apply ";
                print_atom(os, x.fn);
                for (const auto& a : x.args) {
                    os << ' ';
                    print_atom(os, a);
                }
            },
        },
        e->node);
}

}  // namespace

std::string pretty_pattern(const Pattern& p) {
    std::ostringstream os;
    if (const auto* cp = std::get_if<ConPat>(&p)) {
        os << cp->con;
        for (const auto& v : cp->vars) os << ' ' << v;
    } else {
        os << std::get<LitPat>(p).value;
    }
    return os.str();
}

std::string pretty_expr(const ExprPtr& e) {
    std::ostringstream os;
    print_expr(os, e);
    return os.str();
}

std::string pretty(const Program& p) {
    std::ostringstream os;
    for (const auto& d : p.data_decls) {
        os << "data " << d.type_name << " = ";
        bool first = true;
        for (const auto& c : d.constructors) {
            if (!first) os << " | ";
            first = false;
            os << c.name;
            if (c.arity > 0) os << ' ' << c.arity;
        }
        os << '\n';
    }
    for (const auto& f : p.functions) {
        os << f.name;
        for (const auto& param : f.params) os << ' ' << param;
        os << " = ";
        print_expr(os, f.body);
        os << '\n';
    }
    return os.str();
}

std::string pretty(const RProgram& p) { return pretty(embed_program(p)); }

}  // namespace fcvm
