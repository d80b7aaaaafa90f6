#include "fcvm/trail.hpp"

namespace fcvm {

namespace {

void take_frame(Graph& g, BtStack& s, Frame f) {
    if (!f.is_choice) {
        g.set(f.target, std::move(f.replacement));
        return;
    }
    const NodeContent current = g.get(f.target);
    NodeContent restore;
    if (const auto* alt = std::get_if<FwdN>(&f.replacement)) {
        const auto* taken = std::get_if<FwdN>(&current);
        if (!taken)
            throw std::logic_error("choice frame target does not hold the taken branch");
        restore = ChoiceN{taken->target, alt->target};
    } else {
        // narrowing alternative; the node was instantiated from a free
        // variable
        restore = FreeN{};
    }
    g.set(f.target, std::move(f.replacement));
    s.push(Frame{f.target, std::move(restore), false});
}

}  // namespace

void backtrack_step(Graph& g, BtStack& s) { take_frame(g, s, s.pop()); }

bool backtrack_to_choice(Graph& g, BtStack& s) {
    while (!s.empty()) {
        bool is_choice = s.top().is_choice;
        Frame f = s.pop();
        take_frame(g, s, std::move(f));
        if (is_choice) return true;
    }
    return false;
}

void unwind_to_depth(Graph& g, BtStack& s, std::size_t depth) {
    while (s.depth() > depth) backtrack_step(g, s);
}

}  // namespace fcvm
