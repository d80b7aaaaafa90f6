#include "fcvm/graph.hpp"

#include "fcvm/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace fcvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void for_each_child(const NodeContent& c, const std::function<void(NodeId)>& f) {
    std::visit(overloaded{
                   [&](const BotN&) {},
                   [&](const FreeN&) {},
                   [&](const LitN&) {},
                   [&](const ChoiceN& x) {
                       f(x.left);
                       f(x.right);
                   },
                   [&](const FunN& x) {
                       for (NodeId a : x.args) f(a);
                   },
                   [&](const ConN& x) {
                       for (NodeId a : x.args) f(a);
                   },
                   [&](const FwdN& x) { f(x.target); },
                   [&](const PartN& x) {
                       for (NodeId a : x.supplied) f(a);
                   },
               },
               c);
}

}  // namespace

bool operator==(const NodeContent& a, const NodeContent& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        overloaded{
            [&](const BotN&) { return true; },
            [&](const FreeN&) { return true; },
            [&](const LitN& x) { return x.value == std::get<LitN>(b).value; },
            [&](const ChoiceN& x) {
                const auto& y = std::get<ChoiceN>(b);
                return x.left == y.left && x.right == y.right;
            },
            [&](const FunN& x) {
                const auto& y = std::get<FunN>(b);
                return x.fn == y.fn && x.args == y.args;
            },
            [&](const ConN& x) {
                const auto& y = std::get<ConN>(b);
                return x.con == y.con && x.args == y.args;
            },
            [&](const FwdN& x) { return x.target == std::get<FwdN>(b).target; },
            [&](const PartN& x) {
                const auto& y = std::get<PartN>(b);
                return x.head == y.head && x.missing == y.missing && x.supplied == y.supplied;
            },
        },
        a);
}

std::string content_label(const NodeContent& c) {
    return std::visit(
        overloaded{
            [&](const BotN&) -> std::string { return "fail"; },
            [&](const FreeN&) -> std::string { return "free"; },
            [&](const LitN& x) { return "lit " + std::to_string(x.value); },
            [&](const ChoiceN&) -> std::string { return "?"; },
            [&](const FunN& x) { return "fun " + x.fn; },
            [&](const ConN& x) { return "con " + x.con; },
            [&](const FwdN&) -> std::string { return "fwd"; },
            [&](const PartN& x) {
                return "part " + x.head + " missing=" + std::to_string(x.missing);
            },
        },
        c);
}

void Graph::check(NodeId n) const {
    if (!n.valid() || n.index >= store_.size())
        throw GraphError("invalid node id " + std::to_string(n.index));
}

void Graph::check_children(const NodeContent& c) const {
    for_each_child(c, [&](NodeId child) { check(child); });
}

NodeId Graph::alloc(NodeContent c) {
    check_children(c);
    if (store_.size() >= UINT32_MAX - 1) throw GraphError("node store exhausted");
    store_.push_back(std::move(c));
    return NodeId{static_cast<std::uint32_t>(store_.size() - 1)};
}

const NodeContent& Graph::get(NodeId n) const {
    check(n);
    return store_[n.index];
}

void Graph::set(NodeId n, NodeContent c) {
    check(n);
    check_children(c);
    if (const auto* fwd = std::get_if<FwdN>(&c))
        if (fwd->target == n) throw GraphError("self-forwarding node rejected");
    store_[n.index] = std::move(c);
}

NodeId Graph::contract_fwd(NodeId n) const {
    check(n);
    std::size_t hops = 0;
    NodeId cur = n;
    while (const auto* fwd = std::get_if<FwdN>(&store_[cur.index])) {
        cur = fwd->target;
        check(cur);
        if (++hops > store_.size()) throw std::logic_error("forwarding cycle detected");
    }
    return cur;
}

std::set<NodeId> Graph::reachable(NodeId from) const {
    check(from);
    std::set<NodeId> seen;
    std::vector<NodeId> work{from};
    while (!work.empty()) {
        NodeId n = work.back();
        work.pop_back();
        if (!seen.insert(n).second) continue;
        for_each_child(store_[n.index], [&](NodeId child) {
            if (!seen.count(child)) work.push_back(child);
        });
    }
    return seen;
}

Snapshot Graph::snapshot_reachable(NodeId from) const {
    check(from);
    std::map<NodeId, int> canon;
    std::ostringstream os;
    // Iterative DFS with explicit frames so deep graphs cannot overflow the
    // call stack.
    struct WorkItem {
        NodeId node;
        bool close;  // emit closing paren instead of visiting
    };
    std::vector<WorkItem> work{{from, false}};
    while (!work.empty()) {
        WorkItem item = work.back();
        work.pop_back();
        if (item.close) {
            os << ')';
            continue;
        }
        auto it = canon.find(item.node);
        if (it != canon.end()) {
            os << " ^" << it->second;
            continue;
        }
        int id = static_cast<int>(canon.size());
        canon.emplace(item.node, id);
        os << " (" << id << ':' << content_label(store_[item.node.index]);
        work.push_back({item.node, true});
        std::vector<NodeId> children;
        for_each_child(store_[item.node.index], [&](NodeId c) { children.push_back(c); });
        for (auto rit = children.rbegin(); rit != children.rend(); ++rit)
            work.push_back({*rit, false});
    }
    return Snapshot{os.str()};
}

std::string Graph::to_dot(NodeId from) const {
    std::set<NodeId> nodes = reachable(from);
    std::ostringstream os;
    os << "digraph heap {\n";
    os << "  node [shape=box];\n";
    for (NodeId n : nodes) {  // std::set iterates in ascending NodeId order
        const NodeContent& c = store_[n.index];
        std::string label = content_label(c);
        if (std::holds_alternative<FreeN>(c)) {
            auto it = free_names_.find(n);
            if (it != free_names_.end()) label += " " + it->second;
        }
        os << "  n" << n.index << " [label=\"" << label << "\"";
        if (std::holds_alternative<FwdN>(c)) os << ", style=dashed";
        os << "];\n";
    }
    for (NodeId n : nodes) {
        int slot = 0;
        for_each_child(store_[n.index], [&](NodeId child) {
            os << "  n" << n.index << " -> n" << child.index << " [label=\"" << slot << "\"];\n";
            ++slot;
        });
    }
    os << "}\n";
    return os.str();
}

const std::string& Graph::free_label(NodeId n) {
    check(n);
    auto it = free_names_.find(n);
    if (it == free_names_.end())
        it = free_names_.emplace(n, free_var_name(free_counter_++)).first;
    return it->second;
}

}  // namespace fcvm
