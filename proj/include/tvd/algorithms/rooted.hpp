#pragma once

#include "tvd/algorithms/rooted_core.hpp"
#include "tvd/engine.hpp"

namespace tvd {

inline int rooted_core_memory_bits(const RootedCore& c, const RootedBounds& b) {
    const int port_w = bit_width_for(b.n);
    const int dfs_w = bit_width_for(b.horizon());
    int bits = 4;  // settled, state, success, divide
    bits += 3 * port_w;  // prt_in, prt_out, skip
    bits += dfs_w;
    bits += bit_width_for(b.g1_cap());
    bits += 2 * bit_width_for(b.g2_cap());
    bits += static_cast<int>(c.grp_label.size());
    for (const StoredTriple* t : {&c.stored_g1, &c.stored_g2})
        bits += port_w + static_cast<int>(t->label.size()) + dfs_w;
    return bits;
}

// Dispersion of n+1 co-located agents on 1-bounded 1-interval connected
// graphs: f2f communication, 0-hop visibility, n known. Odd rounds move,
// even rounds read the move's outcome. Never self-terminates; runs stop on
// the balance predicate or the round limit.
class Rooted {
public:
    using State = RootedCore;
    using Payload = NoPayload;

    explicit Rooted(int n) : b_{n} {}

    std::string name() const { return "rooted_n_plus_1"; }
    ModelSpec needs() const { return {Visibility::zero_hop, Communication::f2f, 0}; }
    State initial(AgentId) const { return {}; }
    const RootedBounds& bounds() const { return b_; }

    template <class Obs>
    std::optional<Payload> communicate(AgentId, const State&, const Obs&) const {
        return std::nullopt;
    }

    template <class Obs>
    StepOut<State> compute(AgentId id, const State& st, const Obs& obs) const {
        if (!obs.odd_round) {
            if (st.settled) return {st};
            return {rooted_even(st, obs.last_move_success, obs.arrival_port)};
        }
        if (st.settled) {
            State next = st;
            for (char group : {'0', '1'}) {
                AgentId vis = -1;
                for (AgentId a : obs.colocated) {
                    if (obs.active.terminated(a)) continue;
                    const State& cs = obs.states[a];
                    if (cs.settled || cs.grp_label.empty()) continue;
                    if (cs.grp_label.back() == group) {
                        vis = a;
                        break;
                    }
                }
                if (vis < 0) continue;
                OddView v = view_for(vis, obs);
                holder_update(next, obs.states[vis], v, b_);
            }
            return {next};
        }
        OddView v = view_for(id, obs);
        OddOut out = rooted_odd(st, v, b_);
        return {out.next, out.intent};
    }

    int memory_bits(const State& st) const { return rooted_core_memory_bits(st, b_); }

    // Assembles the odd-round view for `who` from co-located state views.
    template <class Obs>
    static OddView view_for(AgentId who, const Obs& obs) {
        OddView v;
        v.deg = obs.my_degree;
        const auto& me = obs.states[who];
        AgentId min_unsettled = -1;
        AgentId holder = -1;
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            const auto& cs = obs.states[a];
            if (cs.settled) {
                if (holder < 0) holder = a;
                continue;
            }
            if (cs.grp_label.empty()) continue;  // parked agents hold no DFS role
            if (min_unsettled < 0) min_unsettled = a;
            if (cs.grp_label != me.grp_label && !v.other_min) {
                v.other_min = &cs;
                v.other_min_prt_in = cs.prt_in;
            }
            if (in_g1(cs) && cs.prt_out == me.prt_out) v.g1_same_port = true;
        }
        // rank and size among my label, ascending ids
        int rank = 0, size = 0;
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            const auto& cs = obs.states[a];
            if (cs.settled || cs.grp_label != me.grp_label) continue;
            if (a == who) rank = size;
            ++size;
        }
        v.rank = rank;
        v.group_size = std::max(size, 1);
        v.settle_opportunity = holder < 0;
        v.holder_present = holder >= 0;
        if (holder >= 0) {
            v.stored_g1 = obs.states[holder].stored_g1;
            v.stored_g2 = obs.states[holder].stored_g2;
        }
        v.is_min_unsettled = min_unsettled == who;
        return v;
    }

private:
    RootedBounds b_;
};

}  // namespace tvd
