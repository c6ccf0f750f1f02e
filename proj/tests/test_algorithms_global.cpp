#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "tvd/algorithms/balanced_global.hpp"
#include "tvd/algorithms/weak_disp.hpp"
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

ModelSpec one_hop_global() { return {Visibility::one_hop, Communication::global, 0}; }

}  // namespace

TEST_CASE("build_sv marks holes and picks minimum ids") {
    auto c4 = Footprint::make(FootprintKind::clique, 4);

    SUBCASE("all neighbors holes") {
        auto cfg = place_counts(4, {2, 0, 0, 0});
        Simulation<WeakDisp> sim(WeakDisp(2), c4, one_hop_global(), cfg);
        auto b = sim.build_observations(Snapshot::full(c4, 1));
        auto sv = build_sv(b.obs[0]);
        CHECK(sv.alpha == 2);
        CHECK(sv.id_v == 1);
        REQUIRE(sv.tuples.size() == 3);
        for (const auto& t : sv.tuples) CHECK(t.id_u == SvTuple::hole);
    }

    SUBCASE("neighbor with agents reports its minimum") {
        Configuration cfg(4);
        cfg.place(0, 7);
        cfg.place(1, 5);
        cfg.place(1, 9);
        Simulation<WeakDisp> sim(WeakDisp(3), c4, one_hop_global(), cfg);
        auto b = sim.build_observations(Snapshot::full(c4, 1));
        auto sv = build_sv(b.obs[sim.index_of(7)]);
        Port toward1 = c4.port_to(0, 1);
        CHECK(sv.tuples[toward1].id_u == 5);
    }

    SUBCASE("three agents next to the empty node yields one bottom tuple") {
        auto cfg = place_counts(4, {3, 3, 3, 0});
        Simulation<WeakDisp> sim(WeakDisp(9), c4, one_hop_global(), cfg);
        auto b = sim.build_observations(Snapshot::full(c4, 1));
        auto sv = build_sv(b.obs[sim.index_of(1)]);
        int bottoms = 0;
        for (const auto& t : sv.tuples) bottoms += t.id_u == SvTuple::hole ? 1 : 0;
        CHECK(bottoms == 1);

        // absent edges carry no tuple
        Snapshot cut = Snapshot::full(c4, 1);
        cut.remove(c4.edge_id(0, 1));
        auto b2 = sim.build_observations(cut);
        auto sv2 = build_sv(b2.obs[sim.index_of(1)]);
        CHECK(sv2.tuples.size() == 2);
    }
}

TEST_CASE("slide: no multinode means everyone stays and terminates") {
    auto r5 = Footprint::make(FootprintKind::ring, 5);
    auto cfg = place_counts(5, {1, 1, 0, 1, 0});
    Simulation<WeakDisp> sim(WeakDisp(3), r5, one_hop_global(), cfg);
    AlwaysFull src;
    auto res = run_rounds(sim, src, StopKind::all_terminated, 5, [](const RoundView&) {});
    CHECK(res.outcome == Outcome::terminated_balanced);
    CHECK(res.rounds == 1);
    CHECK(sim.placement() == cfg);
}

TEST_CASE("slide: multinode adjacent to hole fills it") {
    auto c4 = Footprint::make(FootprintKind::clique, 4);
    auto cfg = place_counts(4, {2, 1, 1, 0});
    Simulation<WeakDisp> sim(WeakDisp(4), c4, one_hop_global(), cfg);
    AlwaysFull src;
    auto rv = sim.step(src);
    CHECK(rv.after->count(3) == 1);
    CHECK(rv.after->count(0) == 1);
    CHECK(rv.after->holes() == 0);
}

TEST_CASE("slide shifts a chain through singly occupied nodes") {
    // path 0-1-2-3: multinode at 0, singles at 1,2, hole at 3
    auto p4 = Footprint::make(FootprintKind::path, 4);
    auto cfg = place_counts(4, {2, 1, 1, 0});
    Simulation<WeakDisp> sim(WeakDisp(4), p4, one_hop_global(), cfg);
    AlwaysFull src;
    auto rv = sim.step(src);
    CHECK(rv.after->count(0) == 1);
    CHECK(rv.after->count(1) == 1);
    CHECK(rv.after->count(2) == 1);
    CHECK(rv.after->count(3) == 1);
}

TEST_CASE("weak dispersion occupancy grows every round on random connected graphs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + draw_below(rng, 4);
        auto f = Footprint::make(FootprintKind::clique, n);
        const int k = 2 + draw_below(rng, n - 1);  // k <= n
        std::vector<int> counts(n, 0);
        for (int i = 0; i < k; ++i) counts[draw_below(rng, std::max(1, n / 2))]++;
        auto cfg = place_counts(n, counts);
        Simulation<WeakDisp> sim(WeakDisp(k), f, one_hop_global(), cfg);
        AlwaysFull src;
        int prev = cfg.occupied_nodes();
        for (int r = 0; r < n + 2 && !sim.all_terminated(); ++r) {
            auto rv = sim.step(src);
            const bool had_room = prev < std::min(k, n);
            if (had_room) CHECK(rv.after->occupied_nodes() > prev);
            prev = rv.after->occupied_nodes();
        }
        CHECK(sim.all_terminated());
        CHECK(is_balanced(sim.placement(), k, n));
    }
}

TEST_CASE("balanced_global: k=n terminates immediately after flipping P") {
    auto c4 = Footprint::make(FootprintKind::clique, 4);
    auto cfg = place_counts(4, {1, 1, 1, 1});
    Simulation<BalancedGlobal> sim(BalancedGlobal(4), c4, one_hop_global(), cfg);
    AlwaysFull src;
    auto res = run_rounds(sim, src, StopKind::all_terminated, 5, [](const RoundView&) {});
    CHECK(res.outcome == Outcome::terminated_balanced);
    CHECK(res.rounds == 2);  // round 1 flips P, round 2 terminates
}

TEST_CASE("balanced_global: hole but no multinode, k<n, terminates at once") {
    auto c5 = Footprint::make(FootprintKind::clique, 5);
    auto cfg = place_counts(5, {1, 1, 1, 0, 0});
    Simulation<BalancedGlobal> sim(BalancedGlobal(3), c5, one_hop_global(), cfg);
    AlwaysFull src;
    auto res = run_rounds(sim, src, StopKind::all_terminated, 5, [](const RoundView&) {});
    CHECK(res.outcome == Outcome::terminated_balanced);
    CHECK(res.rounds == 1);
}

TEST_CASE("balanced_global: (3,3,3,0) reaches a balanced split of nine") {
    auto c4 = Footprint::make(FootprintKind::clique, 4);
    auto cfg = place_counts(4, {3, 3, 3, 0});
    Simulation<BalancedGlobal> sim(BalancedGlobal(9), c4, one_hop_global(), cfg);
    AlwaysFull src;

    // first round: slide fills the hole, occupied grows from 3 to 4
    auto rv = sim.step(src);
    CHECK(rv.after->occupied_nodes() == 4);

    auto res = run_rounds(sim, src, StopKind::all_terminated, 4 * (4 + 9), [](const RoundView&) {});
    CHECK(res.outcome == Outcome::terminated_balanced);
    CHECK(is_balanced(sim.placement(), 9, 4));
}

TEST_CASE("balanced_global terminates balanced over seeded ell-bounded scenarios") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 4 + draw_below(rng, 9);
        const int k = 1 + draw_below(rng, 40);
        const int ell = std::vector<int>{1, 3, n}[draw_below(rng, 3)];
        auto f = Footprint::make(FootprintKind::clique, n);
        std::vector<int> counts(n, 0);
        for (int i = 0; i < k; ++i) counts[draw_below(rng, n)]++;
        auto cfg = place_counts(n, counts);
        Simulation<BalancedGlobal> sim(BalancedGlobal(k), f, one_hop_global(), cfg);
        RandomSchedule src(ell, rng());
        auto res =
            run_rounds(sim, src, StopKind::all_terminated, 4 * (n + k), [](const RoundView&) {});
        CHECK(res.outcome == Outcome::terminated_balanced);
        CHECK(is_balanced(sim.placement(), k, n));
    }
}

TEST_CASE("balanced_global termination implies balance (property over seeds)") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 4 + draw_below(rng, 5);
        const int k = 1 + draw_below(rng, 25);
        auto f = Footprint::make(FootprintKind::ring, n);
        std::vector<int> counts(n, 0);
        for (int i = 0; i < k; ++i) counts[draw_below(rng, n)]++;
        Simulation<BalancedGlobal> sim(BalancedGlobal(k), f, one_hop_global(),
                                       place_counts(n, counts));
        RandomSchedule src(1, rng());
        auto res =
            run_rounds(sim, src, StopKind::all_terminated, 6 * (n + k), [](const RoundView&) {});
        if (res.outcome == Outcome::terminated_balanced)
            CHECK(is_balanced(sim.placement(), k, n));
        CHECK(res.outcome != Outcome::terminated_unbalanced);
    }
}

TEST_CASE("balanced_global memory stays within the id+flag budget") {
    auto c6 = Footprint::make(FootprintKind::clique, 6);
    const int k = 13;
    auto cfg = place_counts(6, {13, 0, 0, 0, 0, 0});
    Simulation<BalancedGlobal> sim(BalancedGlobal(k), c6, one_hop_global(), cfg);
    AlwaysFull src;
    int max_bits = 0;
    auto res = run_rounds(sim, src, StopKind::all_terminated, 4 * (6 + k), [&](const RoundView& rv) {
        for (int b : *rv.memory_bits) max_bits = std::max(max_bits, b);
    });
    CHECK(res.outcome == Outcome::terminated_balanced);
    CHECK(max_bits == bit_width_for(k) + 1);
}
