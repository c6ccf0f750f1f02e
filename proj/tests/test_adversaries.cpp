#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "tvd/adversaries.hpp"
#include "tvd/algorithms/balanced_global.hpp"
#include "tvd/algorithms/baselines.hpp"
#include "tvd/trace.hpp"

using namespace tvd;

namespace {

Configuration place_counts(int n, const std::vector<int>& counts) {
    Configuration c(n);
    AgentId next = 1;
    for (NodeId v = 0; v < n; ++v)
        for (int i = 0; i < counts[v]; ++i) c.place(v, next++);
    return c;
}

struct StayAlgo {
    struct State {
        bool operator==(const State&) const = default;
    };
    using Payload = NoPayload;
    std::string name() const { return "stay"; }
    ModelSpec needs() const { return {Visibility::zero_hop, Communication::f2f, 0}; }
    State initial(AgentId) const { return {}; }
    std::optional<Payload> communicate(AgentId, const State&, const auto&) const {
        return std::nullopt;
    }
    StepOut<State> compute(AgentId, const State& s, const auto&) const { return {s}; }
    int memory_bits(const State&) const { return 0; }
};

// test fixture for the ring construction: one designated agent walks a fixed
// port every round, everyone else stays; on the full ring this balances
struct OneMover {
    struct State {
        bool operator==(const State&) const = default;
    };
    using Payload = NoPayload;
    AgentId mover;
    Port port;
    std::string name() const { return "one_mover"; }
    ModelSpec needs() const { return {Visibility::zero_hop, Communication::f2f, 0}; }
    State initial(AgentId) const { return {}; }
    std::optional<Payload> communicate(AgentId, const State&, const auto&) const {
        return std::nullopt;
    }
    StepOut<State> compute(AgentId id, const State& s, const auto&) const {
        if (id == mover) return {s, MoveIntent::via(port)};
        return {s};
    }
    int memory_bits(const State&) const { return 0; }
};

// test fixture for the path construction: reads counts from the world view,
// recomputes the adversary's sorted order from them, and shifts one agent
// along each of the first four hops, ignoring snapshot presence the way a
// 0-hop agent would
struct ChainShift {
    struct State {
        bool operator==(const State&) const = default;
    };
    using Payload = NoPayload;
    std::string name() const { return "chain_shift"; }
    ModelSpec needs() const { return {Visibility::full, Communication::global, 0}; }
    State initial(AgentId) const { return {}; }
    std::optional<Payload> communicate(AgentId, const State&, const auto&) const {
        return std::nullopt;
    }
    template <class Obs>
    StepOut<State> compute(AgentId id, const State& s, const Obs& obs) const {
        const auto& w = *obs.world;
        const Footprint& f = *w.footprint;
        const int n = f.n();
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
            return w.placement->count(a) > w.placement->count(b);
        });
        for (int i = 0; i + 1 < n && i < 4; ++i) {
            const auto& here = w.placement->at(order[i]);
            if (!here.empty() && here.back() == id)
                return {s, MoveIntent::via(f.port_to(order[i], order[i + 1]))};
        }
        return {s};
    }
    int memory_bits(const State&) const { return 0; }
};

}  // namespace

TEST_CASE("split_max round shapes follow the construction") {
    auto c4 = Footprint::make(FootprintKind::clique, 4);
    auto cfg = place_counts(4, {3, 2, 1, 1});  // k=7=1*4+3, node 0 max with p+2=3
    Simulation<StayAlgo> sim(StayAlgo{}, c4, {Visibility::zero_hop, Communication::f2f, 0}, cfg);
    TemporalSplitMax adv;
    std::vector<Snapshot> prefix;
    for (int r = 0; r < 6; ++r) {
        auto rv = sim.step(adv);
        prefix.push_back(*rv.snapshot);
    }
    // round 1 (construction round 0): node 0 isolated, rest a triangle
    CHECK_FALSE(is_snapshot_connected(c4, prefix[0]));
    CHECK(missing_edge_count(c4, prefix[0]) == 3);
    for (Port p = 0; p < 3; ++p) CHECK_FALSE(prefix[0].has(c4.edge_via_port(0, p)));
    CHECK(prefix[0].has(c4.edge_id(1, 2)));
    CHECK(prefix[0].has(c4.edge_id(1, 3)));
    CHECK(prefix[0].has(c4.edge_id(2, 3)));
    // round 2 (odd construction round): pair {0, max of rest = 1}
    CHECK(prefix[1].has(c4.edge_id(0, 1)));
    CHECK(prefix[1].has(c4.edge_id(2, 3)));
    CHECK_FALSE(prefix[1].has(c4.edge_id(0, 2)));
    CHECK_FALSE(prefix[1].has(c4.edge_id(1, 2)));
    CHECK_FALSE(prefix[1].has(c4.edge_id(1, 3)));
    // the constructed prefix stays temporally connected with horizon 3
    CHECK(check_temporal_connectivity(c4, std::span<const Snapshot>(prefix).subspan(0, 6), 1, 2,
                                      3));
}

TEST_CASE("split_max validates its preconditions") {
    auto c4 = Footprint::make(FootprintKind::clique, 4);
    // no node holds p+2
    auto cfg = place_counts(4, {2, 2, 2, 1});  // k=7, max 2 < 3
    Simulation<StayAlgo> sim(StayAlgo{}, c4, {Visibility::zero_hop, Communication::f2f, 0}, cfg);
    TemporalSplitMax adv;
    CHECK_THROWS_AS(sim.step(adv), ValidationError);

    // q out of range: k=8=2*4+0
    auto cfg2 = place_counts(4, {5, 1, 1, 1});
    Simulation<StayAlgo> sim2(StayAlgo{}, c4, {Visibility::zero_hop, Communication::f2f, 0}, cfg2);
    TemporalSplitMax adv2;
    CHECK_THROWS_AS(sim2.step(adv2), ValidationError);
}

TEST_CASE("split_max keeps a p+2 node against the full-knowledge balancer") {
    auto c6 = Footprint::make(FootprintKind::clique, 6);
    const int k = 6 + 3, p = 1;  // q = 3
    auto cfg = place_counts(6, {3, 2, 1, 1, 1, 1});
    Simulation<BalancedGlobal> sim(BalancedGlobal(k), c6,
                                   {Visibility::full, Communication::global, 0}, cfg);
    TemporalSplitMax adv;
    for (int r = 0; r < 400; ++r) {
        auto rv = sim.step(adv);
        CHECK(rv.after->max_count() >= p + 2);
        CHECK_FALSE(is_balanced(*rv.after, k, 6));
    }
}

TEST_CASE("split_min isolates the lightest node and can delegate") {
    auto c6 = Footprint::make(FootprintKind::clique, 6);
    const int k = 6 + 3;  // p=1, q=3
    auto cfg = place_counts(6, {0, 2, 2, 2, 2, 1});
    Simulation<RandomWalker> sim(RandomWalker(5), c6,
                                 {Visibility::zero_hop, Communication::f2f, 0}, cfg);
    TemporalSplitMin adv;
    auto rv = sim.step(adv);
    // node 0 has the minimum count, so its star goes missing
    for (Port p = 0; p < 5; ++p) CHECK_FALSE(rv.snapshot->has(c6.edge_via_port(0, p)));
    bool delegated = false;
    for (int r = 0; r < 2000; ++r) {
        auto v = sim.step(adv);
        if (!v.reason->empty() && v.reason->find("delegate") != std::string::npos)
            delegated = true;
        CHECK_FALSE(is_balanced(*v.after, k, 6));
    }
    // the walker piles agents up eventually; the handover is expected
    CHECK(delegated);
}

TEST_CASE("ring adversary emits the full ring while the round stays unbalanced") {
    auto r4 = Footprint::make(FootprintKind::ring, 4);
    auto cfg = place_counts(4, {2, 1, 1, 0});  // k=4=pn, p=1, undispersed
    Simulation<StayAlgo> sim(StayAlgo{}, r4, {Visibility::zero_hop, Communication::f2f, 0}, cfg);
    RingOneEdge adv(ImpossibilityVariant::one_hop_f2f);
    for (int r = 0; r < 10; ++r) {
        auto rv = sim.step(adv);
        CHECK(missing_edge_count(r4, *rv.snapshot) == 0);
        CHECK(*rv.reason == "full");
    }
}

TEST_CASE("ring adversary cuts the flow edge when balance is imminent") {
    auto r4 = Footprint::make(FootprintKind::ring, 4);
    auto cfg = place_counts(4, {2, 1, 1, 0});
    // agent 2 sits at node 0; port 1 leads to node 3, the hole: the full
    // ring would end balanced (1,1,1,1)
    OneMover algo{.mover = 2, .port = 1};
    Simulation<OneMover> sim(algo, r4, {Visibility::zero_hop, Communication::f2f, 0}, cfg);
    RingOneEdge adv(ImpossibilityVariant::one_hop_f2f);
    auto rv = sim.step(adv);
    CHECK(missing_edge_count(r4, *rv.snapshot) == 1);
    CHECK(is_snapshot_connected(r4, *rv.snapshot));
    // deficient node 3: inflow positive on the node-0 side, so (0,3) is cut
    CHECK_FALSE(rv.snapshot->has(r4.edge_id(0, 3)));
    CHECK(rv.after->count(3) != 1);
    CHECK_FALSE(is_balanced(*rv.after, 4, 4));
}

TEST_CASE("ring adversary holds the walker and the greedy seeker for long runs") {
    auto r5 = Footprint::make(FootprintKind::ring, 5);
    const int k = 10;  // p = 2
    auto cfg = place_counts(5, {4, 3, 1, 1, 1});

    SUBCASE("walker under the global variant") {
        Simulation<RandomWalker> sim(RandomWalker(9), r5,
                                     {Visibility::zero_hop, Communication::global, 0}, cfg);
        RingOneEdge adv(ImpossibilityVariant::zero_hop_global);
        for (int r = 0; r < 2000; ++r) {
            auto rv = sim.step(adv);
            CHECK(missing_edge_count(r5, *rv.snapshot) <= 1);
            CHECK(is_snapshot_connected(r5, *rv.snapshot));
            CHECK_FALSE(is_balanced(*rv.after, k, 5));
        }
    }
    SUBCASE("greedy hole seeker under the 1-hop variant") {
        Simulation<GreedyHoleSeeker> sim(GreedyHoleSeeker(11), r5,
                                         {Visibility::one_hop, Communication::f2f, 0}, cfg);
        RingOneEdge adv(ImpossibilityVariant::one_hop_f2f);
        for (int r = 0; r < 2000; ++r) {
            auto rv = sim.step(adv);
            CHECK_FALSE(is_balanced(*rv.after, k, 5));
        }
    }
}

TEST_CASE("path adversary: sorted path when heavy, swapped path otherwise") {
    const int n = 6, ell = 36;
    auto c6 = Footprint::make(FootprintKind::clique, n);
    const int k = n + 5;  // p=1, q=5

    SUBCASE("stay keeps the heavy node, so P_r comes out") {
        auto cfg = place_counts(n, {3, 2, 2, 2, 1, 1});
        Simulation<StayAlgo> sim(StayAlgo{}, c6, {Visibility::zero_hop, Communication::f2f, 0},
                                 cfg);
        PathSort adv(ImpossibilityVariant::one_hop_f2f, ell);
        auto rv = sim.step(adv);
        CHECK(*rv.reason == "P_r");
        // counts strictly ordered by construction: the path is 0-1-2-3-4-5
        CHECK(rv.snapshot->present_count() == n - 1);
        for (int i = 0; i + 1 < n; ++i) CHECK(rv.snapshot->has(c6.edge_id(i, i + 1)));
        CHECK(missing_edge_count(c6, *rv.snapshot) == (n - 1) * (n - 2) / 2);
        CHECK(missing_edge_count(c6, *rv.snapshot) <= ell);
    }

    SUBCASE("chain shift would flatten P_r, so P_r_prime appears and re-piles") {
        auto cfg = place_counts(n, {3, 2, 2, 2, 1, 1});
        Simulation<ChainShift> sim(ChainShift{}, c6, {Visibility::full, Communication::global, 0},
                                   cfg);
        PathSort adv(ImpossibilityVariant::zero_hop_global, ell);
        auto rv = sim.step(adv);
        CHECK(*rv.reason == "P_r_prime");
        CHECK(rv.snapshot->present_count() == n - 1);
        CHECK(is_snapshot_connected(c6, *rv.snapshot));
        CHECK_FALSE(rv.snapshot->has(c6.edge_id(3, 4)));  // w4-w5 dropped
        CHECK(rv.snapshot->has(c6.edge_id(0, 4)));        // w1-w5 added
        // the blocked mover leaves the fourth path node at p+2
        CHECK(rv.after->max_count() >= 3);
        CHECK_FALSE(is_balanced(*rv.after, k, n));
    }

    SUBCASE("preconditions") {
        auto cfg = place_counts(n, {3, 2, 2, 2, 1, 1});
        Simulation<StayAlgo> sim(StayAlgo{}, c6, {Visibility::zero_hop, Communication::f2f, 0},
                                 cfg);
        PathSort bad_ell(ImpossibilityVariant::one_hop_f2f, 24);
        CHECK_THROWS_AS(sim.step(bad_ell), ValidationError);
        PathSort small_n(ImpossibilityVariant::one_hop_f2f, 25);  // floor(sqrt(25)) = 5 < 6
        CHECK_THROWS_AS(sim.step(small_n), ValidationError);
    }
}

TEST_CASE("random schedules are reproducible and respect bridges") {
    auto p5 = Footprint::make(FootprintKind::path, 5);
    auto cfg = place_counts(5, {2, 1, 0, 1, 1});
    // every path edge is a bridge: one-bounded removal is never legal
    Simulation<StayAlgo> sim(StayAlgo{}, p5, {Visibility::zero_hop, Communication::f2f, 0}, cfg);
    RandomSchedule adv(1, 7);
    for (int r = 0; r < 30; ++r) {
        auto rv = sim.step(adv);
        CHECK(missing_edge_count(p5, *rv.snapshot) == 0);
    }

    auto run_hash = [](std::uint64_t seed) {
        auto r5 = Footprint::make(FootprintKind::ring, 5);
        Configuration cfg2(5);
        for (AgentId a = 1; a <= 4; ++a) cfg2.place(a % 5, a);
        Simulation<RandomWalker> sim2(RandomWalker(3), r5,
                                      {Visibility::zero_hop, Communication::f2f, 0}, cfg2);
        RandomSchedule adv2(1, seed);
        TraceHasher h;
        for (int r = 0; r < 40; ++r) h.absorb(sim2.step(adv2));
        return h.digest();
    };
    CHECK(run_hash(5) == run_hash(5));
    CHECK(run_hash(5) != run_hash(6));
}

TEST_CASE("oracle output matches the committed engine step exactly") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 4 + draw_below(rng, 4);
        auto f = Footprint::make(FootprintKind::clique, n);
        const int k = 2 + draw_below(rng, 2 * n);
        std::vector<int> counts(n, 0);
        for (int i = 0; i < k; ++i) counts[draw_below(rng, n)]++;
        auto cfg = place_counts(n, counts);

        Simulation<RandomWalker> sim(RandomWalker(trial), f,
                                     {Visibility::zero_hop, Communication::f2f, 0}, cfg);
        // walk a few rounds first so states differ from initial
        RandomSchedule warm(1, rng());
        for (int r = 0; r < draw_below(rng, 5); ++r) sim.step(warm);

        Snapshot hyp = Snapshot::full(f, sim.round() + 1);
        for (int cut = 0; cut < 2; ++cut) {
            EdgeId id = draw_below(rng, f.m());
            hyp.remove(id);
            if (!is_snapshot_connected(f, hyp)) hyp.add(id);
        }
        auto predicted = sim.oracle()(hyp);

        // build a fixed schedule whose next round equals hyp
        std::vector<EdgeId> absent;
        for (EdgeId id = 0; id < f.m(); ++id)
            if (!hyp.has(id)) absent.push_back(id);
        std::vector<std::vector<EdgeId>> rounds(sim.round(), std::vector<EdgeId>{});
        rounds.push_back(absent);
        FixedSchedule src(rounds);
        // a fresh run can't replay mid-state; instead step the same sim
        auto rv = sim.step(src);
        CHECK(*rv.after == predicted.after);
        for (std::size_t i = 0; i < sim.ids().size(); ++i)
            CHECK((*rv.intent_port)[i] == predicted.intent_port[i]);
    }
}
