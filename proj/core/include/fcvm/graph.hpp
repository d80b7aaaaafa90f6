#pragma once

// The mutable expression graph. Nodes are overwritten in place, never freed
// during a run; a node referred to more than once is shared, and rewriting it
// is observed by every referrer.

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fcvm/ast.hpp"

namespace fcvm {

struct NodeId {
    std::uint32_t index = UINT32_MAX;
    bool valid() const { return index != UINT32_MAX; }
    auto operator<=>(const NodeId&) const = default;
};

struct BotN {};
struct FreeN {};
struct ChoiceN {
    NodeId left, right;
};
struct FunN {
    Name fn;
    std::vector<NodeId> args;
};
struct ConN {
    Name con;
    std::vector<NodeId> args;
};
struct LitN {
    std::int64_t value = 0;
};
struct FwdN {
    NodeId target;
};
struct PartN {
    Name head;            // function or constructor
    int missing = 0;      // >= 1; missing + |supplied| == arity of head
    std::vector<NodeId> supplied;
};

using NodeContent = std::variant<BotN, FreeN, ChoiceN, FunN, ConN, LitN, FwdN, PartN>;

bool operator==(const NodeContent& a, const NodeContent& b);
std::string content_label(const NodeContent& c);  // short label, e.g. "con True"

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical, isomorphism-invariant encoding of a reachable subgraph.
// Two snapshots compare equal iff the subgraphs are isomorphic respecting
// sharing and node kinds.
struct Snapshot {
    std::string repr;
    bool operator==(const Snapshot&) const = default;
};

class Graph {
public:
    NodeId alloc(NodeContent c);
    const NodeContent& get(NodeId n) const;
    void set(NodeId n, NodeContent c);
    std::size_t size() const { return store_.size(); }

    NodeId root;

    // First node along the forwarding chain whose content is not a
    // forwarding node; the graph is unchanged.
    NodeId contract_fwd(NodeId n) const;

    std::set<NodeId> reachable(NodeId from) const;
    Snapshot snapshot_reachable(NodeId from) const;
    std::string to_dot(NodeId from) const;

    // Stable display name for an unbound variable (used by dot output).
    const std::string& free_label(NodeId n);

private:
    void check(NodeId n) const;
    void check_children(const NodeContent& c) const;

    std::vector<NodeContent> store_;
    std::map<NodeId, std::string> free_names_;
    int free_counter_ = 0;
};

}  // namespace fcvm
