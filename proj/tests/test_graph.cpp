#include "doctest.h"

#include "fcvm/graph.hpp"
#include "fcvm/trail.hpp"

using namespace fcvm;

TEST_CASE("alloc and read back") {
    Graph g;
    NodeId t = g.alloc(ConN{"True", {}});
    CHECK(std::get<ConN>(g.get(t)).con == "True");
    NodeId fwd = g.alloc(FwdN{t});
    CHECK(std::get<FwdN>(g.get(fwd)).target == t);
    NodeId part = g.alloc(PartN{"and", 1, {t}});
    CHECK(std::get<PartN>(g.get(part)).missing == 1);
}

TEST_CASE("set rewrites in place and rejects self-forwarding") {
    Graph g;
    NodeId n = g.alloc(ConN{"True", {}});
    g.set(n, ConN{"False", {}});
    CHECK(std::get<ConN>(g.get(n)).con == "False");
    CHECK_THROWS_AS(g.set(n, FwdN{n}), GraphError);
}

TEST_CASE("a shared node is observed by every referrer") {
    Graph g;
    NodeId n = g.alloc(FunN{"cheap", {}});
    NodeId xorn = g.alloc(FunN{"xor", {n, n}});
    g.set(n, ConN{"True", {}});
    const auto& app = std::get<FunN>(g.get(xorn));
    CHECK(std::get<ConN>(g.get(app.args[0])).con == "True");
    CHECK(std::get<ConN>(g.get(app.args[1])).con == "True");
    CHECK(app.args[0] == app.args[1]);
}

TEST_CASE("contract_fwd follows chains and stops at non-forwarding nodes") {
    Graph g;
    NodeId m = g.alloc(ConN{"True", {}});
    CHECK(g.contract_fwd(m) == m);
    NodeId f1 = g.alloc(FwdN{m});
    NodeId f2 = g.alloc(FwdN{f1});
    CHECK(g.contract_fwd(f2) == m);
}

TEST_CASE("contract_fwd detects cycles") {
    Graph g;
    NodeId a = g.alloc(BotN{});
    NodeId b = g.alloc(FwdN{a});
    g.set(a, FwdN{b});
    CHECK_THROWS_AS(g.contract_fwd(a), std::logic_error);
}

TEST_CASE("reachable respects sharing") {
    Graph g;
    NodeId t = g.alloc(ConN{"True", {}});
    CHECK(g.reachable(t).size() == 1);
    NodeId xorn = g.alloc(FunN{"xor", {t, t}});
    auto r = g.reachable(xorn);
    CHECK(r.size() == 2);
    CHECK(r.count(t) == 1);
}

TEST_CASE("snapshots separate shared from copied structure") {
    Graph g;
    NodeId t = g.alloc(ConN{"True", {}});
    NodeId shared = g.alloc(FunN{"xor", {t, t}});
    NodeId t2 = g.alloc(ConN{"True", {}});
    NodeId copied = g.alloc(FunN{"xor", {t, t2}});
    CHECK(g.snapshot_reachable(shared) == g.snapshot_reachable(shared));
    CHECK_FALSE(g.snapshot_reachable(shared) == g.snapshot_reachable(copied));
}

TEST_CASE("snapshots are isomorphism-invariant") {
    Graph g1;
    NodeId a1 = g1.alloc(ConN{"True", {}});
    NodeId r1 = g1.alloc(FunN{"xor", {a1, a1}});
    Graph g2;
    NodeId pad = g2.alloc(LitN{42});  // shift node ids
    (void)pad;
    NodeId a2 = g2.alloc(ConN{"True", {}});
    NodeId r2 = g2.alloc(FunN{"xor", {a2, a2}});
    CHECK(g1.snapshot_reachable(r1) == g2.snapshot_reachable(r2));
}

TEST_CASE("dot output is deterministic and shows shared edges") {
    Graph g;
    NodeId t = g.alloc(ConN{"True", {}});
    NodeId f = g.alloc(ConN{"False", {}});
    NodeId choice = g.alloc(ChoiceN{t, f});
    NodeId id1 = g.alloc(FunN{"id", {choice}});
    NodeId id2 = g.alloc(FunN{"id", {choice}});
    NodeId root = g.alloc(FunN{"xor", {id1, id2}});
    std::string dot = g.to_dot(root);
    CHECK(dot == g.to_dot(root));
    // two edges into the shared choice node
    std::string needle = "-> n" + std::to_string(choice.index);
    std::size_t count = 0;
    for (std::size_t pos = dot.find(needle); pos != std::string::npos;
         pos = dot.find(needle, pos + 1))
        ++count;
    CHECK(count == 2);

    Graph single;
    NodeId one = single.alloc(ConN{"True", {}});
    std::string one_dot = single.to_dot(one);
    CHECK(one_dot.find("con True") != std::string::npos);
}

TEST_CASE("backtrack_step pops and applies one frame") {
    Graph g;
    BtStack s;
    NodeId n = g.alloc(ConN{"False", {}});
    s.push(Frame{n, ConN{"True", {}}, false});
    backtrack_step(g, s);
    CHECK(std::get<ConN>(g.get(n)).con == "True");
    CHECK(s.empty());
    CHECK_THROWS_AS(backtrack_step(g, s), GraphError);
}

TEST_CASE("taking a choice frame installs the alternative and a restore frame") {
    Graph g;
    BtStack s;
    NodeId y = g.alloc(LitN{0});
    NodeId z = g.alloc(LitN{1});
    NodeId x = g.alloc(FwdN{y});  // as left by a choice rewrite
    s.push(Frame{x, FwdN{z}, true});

    CHECK(backtrack_to_choice(g, s));
    CHECK(std::get<FwdN>(g.get(x)).target == z);
    REQUIRE(s.depth() == 1);
    const Frame& restore = s.top();
    CHECK_FALSE(restore.is_choice);
    CHECK(restore.target == x);
    const auto& choice = std::get<ChoiceN>(restore.replacement);
    CHECK(choice.left == y);
    CHECK(choice.right == z);
}

TEST_CASE("backtrack_to_choice applies deterministic frames on the way down") {
    Graph g;
    NodeId a = g.alloc(LitN{10});
    NodeId b = g.alloc(LitN{20});
    NodeId y = g.alloc(LitN{0});
    NodeId z = g.alloc(LitN{1});
    NodeId x = g.alloc(FwdN{y});

    auto build_stack = [&]() {
        BtStack s;
        s.push(Frame{x, FwdN{z}, true});
        s.push(Frame{b, LitN{21}, false});
        s.push(Frame{a, LitN{11}, false});
        return s;
    };

    // direct transition
    Graph g1 = g;
    BtStack s1 = build_stack();
    CHECK(backtrack_to_choice(g1, s1));

    // the naive composition: single steps over deterministic frames, then one
    // choice-frame step
    Graph g2 = g;
    BtStack s2 = build_stack();
    while (!s2.top().is_choice) backtrack_step(g2, s2);
    backtrack_step(g2, s2);

    CHECK(g1.snapshot_reachable(x) == g2.snapshot_reachable(x));
    CHECK(std::get<LitN>(g1.get(a)).value == 11);
    CHECK(std::get<LitN>(g1.get(b)).value == 21);
    CHECK(s1.depth() == s2.depth());
}

TEST_CASE("exhausted stacks report no choice and leave the graph restored") {
    Graph g;
    BtStack s;
    NodeId n = g.alloc(LitN{5});
    Snapshot before = g.snapshot_reachable(n);
    CHECK_FALSE(backtrack_to_choice(g, s));
    CHECK(g.snapshot_reachable(n) == before);
}

TEST_CASE("unwind_to_depth replays every frame") {
    Graph g;
    BtStack s;
    NodeId n = g.alloc(LitN{0});
    Snapshot before = g.snapshot_reachable(n);
    // three journaled rewrites
    for (int i = 1; i <= 3; ++i) {
        s.push(Frame{n, g.get(n), false});
        g.set(n, LitN{i});
    }
    unwind_to_depth(g, s, 0);
    CHECK(g.snapshot_reachable(n) == before);
    CHECK(s.empty());
}
