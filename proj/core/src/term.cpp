#include "fcvm/term.hpp"

#include <sstream>

namespace fcvm {

bool equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* ca = std::get_if<ConT>(&a->node)) {
        const auto& cb = std::get<ConT>(b->node);
        if (ca->con != cb.con || ca->args.size() != cb.args.size()) return false;
        for (std::size_t i = 0; i < ca->args.size(); ++i)
            if (!equal(ca->args[i], cb.args[i])) return false;
        return true;
    }
    if (const auto* la = std::get_if<LitT>(&a->node))
        return la->value == std::get<LitT>(b->node).value;
    return std::get<FreeT>(a->node).name == std::get<FreeT>(b->node).name;
}

namespace {

void print_term(std::ostream& os, const TermPtr& t, bool arg_position) {
    if (const auto* c = std::get_if<ConT>(&t->node)) {
        if (arg_position && !c->args.empty()) os << '(';
        os << c->con;
        for (const auto& a : c->args) {
            os << ' ';
            print_term(os, a, true);
        }
        if (arg_position && !c->args.empty()) os << ')';
        return;
    }
    if (const auto* l = std::get_if<LitT>(&t->node)) {
        if (arg_position && l->value < 0) {
            os << '(' << l->value << ')';
        } else {
            os << l->value;
        }
        return;
    }
    os << std::get<FreeT>(t->node).name;
}

}  // namespace

std::string to_string(const TermPtr& t) {
    std::ostringstream os;
    print_term(os, t, false);
    return os.str();
}

std::string to_string(const Answer& a) {
    return a.is_value() ? to_string(a.term) : std::string("<fail>");
}

std::string free_var_name(int index) {
    int letter = index % 26;
    int round = index / 26;
    std::string name = "_";
    name += static_cast<char>('a' + letter);
    if (round > 0) name += std::to_string(round);
    return name;
}

}  // namespace fcvm
