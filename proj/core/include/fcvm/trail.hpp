#pragma once

// The backtracking trail: a LIFO of (target, replacement) frames.
// Deterministic frames undo rewrites; choice-marked frames are resumption
// points carrying the next untried alternative.

#include <vector>

#include "fcvm/graph.hpp"

namespace fcvm {

struct Frame {
    NodeId target;
    NodeContent replacement;
    bool is_choice = false;
};

class BtStack {
public:
    void push(Frame f) { frames_.push_back(std::move(f)); }
    Frame pop() {
        if (frames_.empty()) throw GraphError("backtracking on an empty stack");
        Frame f = std::move(frames_.back());
        frames_.pop_back();
        return f;
    }
    const Frame& top() const {
        if (frames_.empty()) throw GraphError("backtracking on an empty stack");
        return frames_.back();
    }
    bool empty() const { return frames_.empty(); }
    std::size_t depth() const { return frames_.size(); }
    const std::vector<Frame>& frames() const { return frames_; }

private:
    std::vector<Frame> frames_;
};

// Applies the top frame. A deterministic frame is a plain undo. Taking a
// choice frame swaps in the stored alternative and pushes a deterministic
// restore frame so that a full unwind re-establishes the node's previous
// state: for a choice-point frame (replacement FWD(z) over a node holding
// FWD(y)) the restore is the reconstructed choice ?(y,z); for a narrowing
// alternative the restore is the free variable it instantiated.
void backtrack_step(Graph& g, BtStack& s);

// Pops and applies deterministic frames until the first choice frame, takes
// it as above and returns true; returns false (all frames applied) when no
// choice frame remains.
bool backtrack_to_choice(Graph& g, BtStack& s);

// Repeated backtrack_step until the stack is back at `depth`.
void unwind_to_depth(Graph& g, BtStack& s, std::size_t depth);

}  // namespace fcvm
