#pragma once

#include "tvd/algorithms/rooted.hpp"

namespace tvd {

// State for k = pn+q co-located agents, q in {1,2}. The rooted machine core
// is reused twice: phase 2 runs it over the n super-agents g_1..g_n (every
// member of a group mirrors the group's core), phase 3 re-runs it over the
// leftover agents with settling redefined as filling nodes below p residents
// up to p+1. A node's surplus slot is held by a parked agent: stationary but
// unsettled, so the endgames can still move it.
struct PnqState {
    RootedCore core;
    long long r = 0;  // rounds since start, incremented every round
    int id1 = 0;      // group index in [1, n]; 0 = unassigned
    int p = 0;
    int q = 0;
    int phase = 1;
    bool parked = false;
    bool stopped = false;        // leftover group waiting for phase 3
    long long phase3_start = 0;  // engine round my phase-3 machine begins; 0 = unset
    bool ending = false;         // endgame move issued; terminate next round

    bool operator==(const PnqState&) const = default;
};

class Pnq {
public:
    using State = PnqState;
    using Payload = NoPayload;

    explicit Pnq(int n) : b_{n} {}

    std::string name() const { return "pnq"; }
    ModelSpec needs() const { return {Visibility::zero_hop, Communication::f2f, 0}; }
    State initial(AgentId) const { return {}; }
    const RootedBounds& bounds() const { return b_; }

    long long phase2_deadline() const { return b_.horizon() + 2; }
    long long phase3_horizon(int p, int q) const {
        const long long n = b_.n;
        return 8 * n * n + 128 * n * n * n * n * ceil_log2(std::max<long long>(2, p + q));
    }

    template <class Obs>
    std::optional<Payload> communicate(AgentId, const State&, const Obs&) const {
        return std::nullopt;
    }

    template <class Obs>
    StepOut<State> compute(AgentId id, const State& st0, const Obs& obs) const {
        State st = st0;
        st.r = st0.r + 1;
        if (st.ending) {
            st.ending = false;
            return {st, MoveIntent::stay(), true};
        }
        switch (st.phase) {
            case 1: return phase1(id, st, obs);
            case 2: return phase2(id, st, obs);
            default: return phase3(id, st, obs);
        }
    }

    int memory_bits(const State& st) const {
        int bits = rooted_core_memory_bits(st.core, b_);
        const long long total =
            2 * (b_.horizon() + 8LL * b_.n * b_.n) + 2 * phase3_horizon(st.p, st.q) + 8;
        bits += 2 * bit_width_for(total);  // r and phase3_start
        bits += bit_width_for(b_.n);       // id1
        bits += bit_width_for(std::max(st.p, 1)) + 2;  // p, q
        bits += 2 + 3;  // phase; parked, stopped, ending
        return bits;
    }

private:
    RootedBounds b_;

    template <class Obs>
    static bool resident(const Obs& obs, AgentId a) {
        const PnqState& cs = obs.states[a];
        return cs.core.settled || cs.parked || obs.active.terminated(a);
    }

    template <class Obs>
    static int resident_count(const Obs& obs) {
        int c = 0;
        for (AgentId a : obs.colocated) c += resident(obs, a) ? 1 : 0;
        return c;
    }

    // --- phase 1: grouping -------------------------------------------------

    template <class Obs>
    StepOut<State> phase1(AgentId id, State st, const Obs& obs) const {
        const int k = static_cast<int>(obs.colocated.size());
        const int n = b_.n;
        st.p = k / n;
        st.q = k - st.p * n;
        int rank = 0;
        for (AgentId a : obs.colocated) {
            if (a == id) break;
            ++rank;
        }
        if (st.p == 0) {
            if (k == 1) return {st, MoveIntent::stay(), true};
            // k = 2: spread over ports 0 and 1 (or settle the degree-1 node)
            if (obs.my_degree == 1) {
                if (rank == 0) return {st, MoveIntent::stay(), true};
                st.ending = true;
                return {st, MoveIntent::via(0)};
            }
            st.ending = true;
            return {st, MoveIntent::via(rank == 0 ? 0 : 1)};
        }
        st.id1 = rank < st.p * (n - 1) ? rank / st.p + 1 : n;
        st.phase = 2;
        return {st};
    }

    // --- phase 2: the machine over super-agents ----------------------------

    // groups present at the node: unsettled, not parked, not stopped
    struct GroupRef {
        int id1;
        const RootedCore* core;
    };

    template <class Obs>
    std::vector<GroupRef> unsettled_groups(const Obs& obs) const {
        std::vector<GroupRef> gs;
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            const PnqState& cs = obs.states[a];
            if (cs.phase != 2 || cs.core.settled || cs.parked || cs.stopped) continue;
            if (cs.id1 == 0) continue;
            bool seen = false;
            for (const auto& g : gs) seen = seen || g.id1 == cs.id1;
            if (!seen) gs.push_back({cs.id1, &cs.core});
        }
        std::sort(gs.begin(), gs.end(), [](const GroupRef& a, const GroupRef& b) {
            return a.id1 < b.id1;
        });
        return gs;
    }

    template <class Obs>
    OddView group_view(const State& st, const Obs& obs,
                       const std::vector<GroupRef>& gs) const {
        OddView v;
        v.deg = obs.my_degree;
        v.settle_opportunity = resident_count(obs) == 0;
        for (AgentId a : obs.colocated) {
            const PnqState& cs = obs.states[a];
            if ((cs.core.settled || cs.parked) && !v.holder_present) {
                v.holder_present = true;
                v.stored_g1 = cs.core.stored_g1;
                v.stored_g2 = cs.core.stored_g2;
            }
        }
        int min_id1 = INT32_MAX;
        for (const auto& g : gs) min_id1 = std::min(min_id1, g.id1);
        v.is_min_unsettled = st.id1 == min_id1;
        int rank = 0, size = 0;
        for (const auto& g : gs) {
            if (g.core->grp_label != st.core.grp_label) continue;
            if (g.id1 == st.id1) rank = size;
            ++size;
        }
        v.rank = rank;
        v.group_size = std::max(size, 1);
        v.divide_floor = true;  // the list of groups splits at floor(l/2)
        for (const auto& g : gs) {
            if (g.core->grp_label == st.core.grp_label) continue;
            if (!v.other_min) {
                v.other_min = g.core;
                v.other_min_prt_in = g.core->prt_in;
            }
            if (in_g1(*g.core) && g.core->prt_out == st.core.prt_out) v.g1_same_port = true;
        }
        return v;
    }

    template <class Obs>
    StepOut<State> phase2(AgentId id, State st, const Obs& obs) const {
        const long long deadline = phase2_deadline();  // T + 2
        // scheduled handover to phase 3
        if (st.phase3_start > 0 && st.r == st.phase3_start) {
            st.phase = 3;
            st.stopped = false;
            const bool was_parked = st.parked;
            st.parked = false;
            st.core = RootedCore{};
            // the phase-3 label space starts "11" so stored phase-2 labels
            // (all prefixed "10") can never read as already-visited
            st.core.grp_label = was_parked ? "111" : "110";
            st.core.divide = was_parked || st.id1 != b_.n;
            return phase3(id, st, obs);
        }
        if (st.parked || st.stopped) {
            if (st.r == deadline && st.phase3_start == 0) st.phase3_start = deadline + 1;
            if (st.parked) holder_pass(st, obs);
            return {st};
        }
        if (st.core.settled) {
            holder_pass(st, obs);
            return {st};
        }

        const long long mr = st.r - 1;  // machine rounds start with the second round
        if (mr % 2 == 0) return {even_pass(st, obs)};

        auto gs = unsettled_groups(obs);
        OddView v = group_view(st, obs, gs);

        // leftover detection: my label-block is down to one group and the
        // other side is known dispersed (never formed, or its counter cap)
        const bool alone = v.group_size == 1;
        bool others_done = !st.core.divide;
        if (!st.core.success) {
            if (in_g1(st.core) && st.core.count_1 + 1 >= b_.g1_cap()) others_done = true;
            if (in_g2(st.core) && st.core.count_2 + 1 >= b_.g2_cap() &&
                st.core.count_3 + 1 >= b_.g2_cap())
                others_done = true;
        }
        if (alone && others_done) {
            st.stopped = true;
            st.phase3_start = st.id1 == b_.n ? st.r + 1 : deadline + 1;
            return {st};
        }
        if (st.r >= deadline) {
            st.stopped = true;
            st.phase3_start = deadline + 1;
            return {st};
        }

        OddOut out = rooted_odd(st.core, v, b_);
        if (out.settled_now) {
            // the whole group settles; g_n parks its q smallest ids to keep
            // them movable for phase 3
            int rank = 0;
            for (AgentId a : obs.colocated) {
                if (obs.active.terminated(a)) continue;
                const PnqState& cs = obs.states[a];
                if (cs.id1 != st.id1 || cs.core.settled || cs.parked) continue;
                if (a == id) break;
                ++rank;
            }
            st.core = out.next;
            if (st.id1 == b_.n && rank < st.q) {
                st.core.settled = false;
                st.parked = true;
            }
            return {st};
        }
        st.core = out.next;
        return {st, out.intent};
    }

    // --- phase 3: the machine over individual agents -----------------------

    template <class Obs>
    StepOut<State> phase3(AgentId id, State st, const Obs& obs) const {
        const long long pr = st.r - (st.phase3_start - 1);
        if (st.parked) return parked_pass(id, st, obs);
        if (st.core.settled) {
            holder_pass(st, obs);
            return {st};
        }
        if (pr % 2 == 0) return {even_pass(st, obs)};

        // walkers of my label here (unsettled, unparked, active)
        std::vector<AgentId> peers;
        AgentId min_walker = -1;
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            const PnqState& cs = obs.states[a];
            if (cs.core.settled || cs.parked || cs.phase != 3) continue;
            if (min_walker < 0) min_walker = a;
            if (cs.core.grp_label == st.core.grp_label) peers.push_back(a);
        }
        const int residents = resident_count(obs);
        const bool eligible = !st.core.divide || pr > phase3_horizon(st.p, st.q);

        if (eligible && peers.size() == 1) {
            if (residents == st.p && id == min_walker)
                return {st, MoveIntent::stay(), true};
            if (residents == st.p + 1 && parked_here(obs)) {
                st.ending = true;
                return {st, MoveIntent::via(0)};
            }
        }
        if (eligible && peers.size() == 2 && residents == st.p) {
            const int rank = peers[0] == id ? 0 : 1;
            if (obs.my_degree == 1) {
                if (rank == 0) return {st, MoveIntent::stay(), true};
                st.ending = true;
                return {st, MoveIntent::via(0)};
            }
            st.ending = true;
            return {st, MoveIntent::via(rank == 0 ? 0 : 1)};
        }

        // the machine, with settling redefined: explore arrivals fill nodes
        // holding fewer than p residents up to p, plus one parked surplus
        if (!st.core.backtracking && st.core.success && residents < st.p) {
            std::vector<AgentId> fillers;
            for (AgentId a : obs.colocated) {
                if (obs.active.terminated(a)) continue;
                const PnqState& cs = obs.states[a];
                if (cs.core.settled || cs.parked || cs.phase != 3) continue;
                fillers.push_back(a);
            }
            const int t = std::min<int>(static_cast<int>(fillers.size()), st.p - residents);
            int rank = static_cast<int>(std::lower_bound(fillers.begin(), fillers.end(), id) -
                                        fillers.begin());
            if (rank < t || (rank == t && residents + t == st.p &&
                             static_cast<int>(fillers.size()) > t)) {
                OddView v = agent_view(st, obs, id);
                v.settle_opportunity = true;
                v.is_min_unsettled = true;
                OddOut out = rooted_odd(st.core, v, b_);  // settles
                st.core = out.next;
                if (rank == t) {  // the surplus slot stays movable
                    st.core.settled = false;
                    st.parked = true;
                }
                return {st};
            }
            OddView v = agent_view(st, obs, id);
            v.settle_opportunity = true;
            v.is_min_unsettled = false;
            OddOut out = rooted_odd(st.core, v, b_);
            st.core = out.next;
            return {st, out.intent};
        }
        OddView v = agent_view(st, obs, id);
        OddOut out = rooted_odd(st.core, v, b_);
        st.core = out.next;
        return {st, out.intent};
    }

    template <class Obs>
    static bool parked_here(const Obs& obs) {
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            if (obs.states[a].parked) return true;
        }
        return false;
    }

    // parked surplus: inert except when a lone eligible walker here needs a
    // second mover to shed the node down to p
    template <class Obs>
    StepOut<State> parked_pass(AgentId id, State st, const Obs& obs) const {
        AgentId parked_min = -1;
        for (AgentId a : obs.colocated) {
            if (!obs.active.terminated(a) && obs.states[a].parked) {
                parked_min = a;
                break;
            }
        }
        std::vector<AgentId> walkers;
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            const PnqState& cs = obs.states[a];
            if (cs.phase == 3 && !cs.core.settled && !cs.parked) walkers.push_back(a);
        }
        if (walkers.size() == 1 && parked_min == id) {
            const PnqState& w = obs.states[walkers.front()];
            const long long wpr = w.r + 1 - (w.phase3_start - 1);
            const bool w_elig =
                wpr % 2 == 1 && (!w.core.divide || wpr > phase3_horizon(w.p, w.q));
            int same_label = 0;
            for (AgentId a : walkers)
                same_label += obs.states[a].core.grp_label == w.core.grp_label ? 1 : 0;
            if (w_elig && same_label == 1 && resident_count(obs) == st.p + 1) {
                if (obs.my_degree == 1) return {st, MoveIntent::stay(), true};
                st.ending = true;
                return {st, MoveIntent::via(1)};
            }
        }
        holder_pass(st, obs);
        return {st};
    }

    // --- shared helpers -----------------------------------------------------

    State even_pass(State st, const auto& obs) const {
        st.core = rooted_even(st.core, obs.last_move_success, obs.arrival_port);
        return st;
    }

    template <class Obs>
    OddView agent_view(const State& st, const Obs& obs, AgentId who = -1) const {
        OddView v;
        v.deg = obs.my_degree;
        v.settle_opportunity = false;
        AgentId min_unsettled = -1;
        int rank = 0, size = 0;
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            const PnqState& cs = obs.states[a];
            if (cs.core.settled || cs.parked) {
                if (!v.holder_present) {
                    v.holder_present = true;
                    v.stored_g1 = cs.core.stored_g1;
                    v.stored_g2 = cs.core.stored_g2;
                }
                continue;
            }
            if (cs.phase != 3) continue;
            if (min_unsettled < 0) min_unsettled = a;
            if (cs.core.grp_label != st.core.grp_label) {
                if (!v.other_min) {
                    v.other_min = &cs.core;
                    v.other_min_prt_in = cs.core.prt_in;
                }
            } else {
                if (a == who) rank = size;
                ++size;
            }
            if (in_g1(cs.core) && cs.core.prt_out == st.core.prt_out) v.g1_same_port = true;
        }
        v.rank = rank;
        v.group_size = std::max(size, 1);
        v.is_min_unsettled = who >= 0 && min_unsettled == who;
        return v;
    }

    // every resident mirrors each visiting group's decision into the stored
    // triples; visitors act only on their own movement parity
    template <class Obs>
    void holder_pass(State& st, const Obs& obs) const {
        // phase-2 group visitors
        auto gs = unsettled_groups(obs);
        for (const auto& g : gs) {
            State tmp;
            tmp.id1 = g.id1;
            tmp.core = *g.core;
            AgentId member = -1;
            for (AgentId a : obs.colocated) {
                const PnqState& cs = obs.states[a];
                if (!obs.active.terminated(a) && cs.phase == 2 && cs.id1 == g.id1 &&
                    !cs.core.settled && !cs.parked && !cs.stopped) {
                    member = a;
                    break;
                }
            }
            if (member < 0) continue;
            const PnqState& vis = obs.states[member];
            const long long mr = vis.r + 1 - 1;
            if (mr % 2 != 1) continue;
            OddView vv = group_view(tmp, obs, gs);
            holder_update(st.core, vis.core, vv, b_);
        }
        // phase-3 agent visitors, one per label
        std::vector<std::string> seen;
        for (AgentId a : obs.colocated) {
            if (obs.active.terminated(a)) continue;
            const PnqState& cs = obs.states[a];
            if (cs.phase != 3 || cs.core.settled || cs.parked || cs.core.grp_label.empty())
                continue;
            const long long pr = cs.r + 1 - (cs.phase3_start - 1);
            if (pr % 2 != 1) continue;
            bool dup = false;
            for (const auto& l : seen) dup = dup || l == cs.core.grp_label;
            if (dup) continue;
            seen.push_back(cs.core.grp_label);
            State tmp;
            tmp.core = cs.core;
            tmp.p = cs.p;
            tmp.q = cs.q;
            OddView vv = agent_view(tmp, obs, a);
            holder_update(st.core, cs.core, vv, b_);
        }
    }
};

}  // namespace tvd
