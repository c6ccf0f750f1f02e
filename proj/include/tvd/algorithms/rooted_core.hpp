#pragma once

#include <string>

#include "tvd/observation.hpp"

namespace tvd {

// Per-node bookkeeping a settled agent keeps for one group's DFS: the port
// the group entered by (-1 marks a DFS root), the group's label, and which
// of its DFS traversals last touched this node.
struct StoredTriple {
    Port parent = -1;
    std::string label;  // empty = unset marker
    int dfs_label = 0;

    bool operator==(const StoredTriple&) const = default;
};

// The persisted fields of the co-located-start DFS machine. Group membership
// reads off the label's last bit: 0 means G1, 1 means G2. Settled agents
// clear the label and keep the two per-node triples.
struct RootedCore {
    bool settled = false;
    Port prt_in = -1;
    Port prt_out = -1;
    bool backtracking = false;  // state: explore / backtrack
    int dfs_label = 1;
    bool success = true;
    Port skip = -1;
    bool divide = false;
    std::string grp_label = "10";
    long long count_1 = 0;
    long long count_2 = 0;
    long long count_3 = 0;
    StoredTriple stored_g1;
    StoredTriple stored_g2;

    bool operator==(const RootedCore&) const = default;
};

inline bool in_g1(const RootedCore& c) {
    return !c.settled && !c.grp_label.empty() && c.grp_label.back() == '0';
}
inline bool in_g2(const RootedCore& c) {
    return !c.settled && !c.grp_label.empty() && c.grp_label.back() == '1';
}

struct RootedBounds {
    int n = 0;
    long long g1_cap() const { return 16LL * n * n; }
    long long g2_cap() const { return 4LL * n * n; }
    // the known self-termination horizon: 8n^2 + 128 n^4 ceil(log2 n) rounds
    long long horizon() const {
        return 8LL * n * n + 128LL * n * n * n * n * ceil_log2(n);
    }
};

inline Port min_available_except(int deg, Port skip) {
    for (Port p = 0; p < deg; ++p)
        if (p != skip) return p;
    return 0;  // deg 1 with its only port skipped; unreachable on connected rounds
}

// What the machine sees at its node on an odd (movement) round.
struct OddView {
    int deg = 0;
    bool settle_opportunity = false;  // explorer may settle on arrival here
    bool holder_present = false;      // a settled agent keeps triples here
    StoredTriple stored_g1;
    StoredTriple stored_g2;
    bool is_min_unsettled = false;  // smallest id among all unsettled here
    bool g1_same_port = false;      // an unsettled G1 here shares my prt_out
    const RootedCore* other_min = nullptr;  // min unsettled core of the other group
    Port other_min_prt_in = -1;
    int rank = 0;        // my position among same-label unsettled, ascending ids
    int group_size = 1;  // their count
    bool divide_floor = false;  // split lists of super-agents at floor(l/2)
};

struct OddOut {
    RootedCore next;
    MoveIntent intent = MoveIntent::stay();
    bool settled_now = false;
    bool divided = false;
};

// Halves the co-located group by id rank: the lower half appends 0 and stays
// G1, the upper half appends 1 and becomes G2; both restart a DFS through
// port 0. Counters restart with the new group epoch.
inline OddOut group_divide(const RootedCore& c, const OddView& v) {
    OddOut out;
    out.next = c;
    out.divided = true;
    const int half = v.divide_floor ? v.group_size / 2 : (v.group_size + 1) / 2;
    out.next.grp_label += v.rank < half ? '0' : '1';
    out.next.prt_out = 0;
    out.next.backtracking = false;
    out.next.skip = -1;
    out.next.dfs_label = c.dfs_label + 1;
    out.next.count_1 = 0;
    out.next.count_2 = 0;
    out.next.count_3 = 0;
    out.intent = MoveIntent::via(0);
    return out;
}

// Settle in place: record my own triple (entry port -1 marks me as a root
// when I never moved) and, when the other group stands here too, its triple.
inline OddOut settle_here(const RootedCore& c, const OddView& v) {
    OddOut out;
    out.next = c;
    out.settled_now = true;
    out.next.settled = true;
    StoredTriple own{c.prt_in, c.grp_label, c.dfs_label};
    if (in_g1(c))
        out.next.stored_g1 = own;
    else
        out.next.stored_g2 = own;
    if (v.other_min) {
        StoredTriple other{v.other_min_prt_in, v.other_min->grp_label, v.other_min->dfs_label};
        if (in_g1(c))
            out.next.stored_g2 = other;
        else
            out.next.stored_g1 = other;
    }
    out.next.grp_label.clear();
    return out;
}

// G1 movement on an odd round: plain DFS that never deviates from a blocked
// port. The first-ever failure flips the divide flag and splits the group;
// afterwards a split happens only after g1_cap consecutive blocked odd
// rounds, by which time G2 is dispersed.
inline OddOut rooted_g1_odd(const RootedCore& c, const OddView& v, const RootedBounds& b) {
    OddOut out;
    out.next = c;
    if (c.success) {
        out.next.count_1 = 0;
        if (!c.backtracking) {
            if (v.settle_opportunity) {
                if (v.is_min_unsettled) return settle_here(out.next, v);
                out.next.prt_out = (c.prt_in + 1) % v.deg;
                if (out.next.prt_out == c.prt_in) out.next.backtracking = true;
                out.intent = MoveIntent::via(out.next.prt_out);
                return out;
            }
            // settled agent here: visited iff the stored label is mine; the
            // label changes at every division, so no dfs_label check is needed
            if (v.holder_present && v.stored_g1.label == c.grp_label) {
                out.next.backtracking = true;
                out.next.prt_out = c.prt_in;
                out.intent = MoveIntent::via(out.next.prt_out);
                return out;
            }
            out.next.prt_out = (c.prt_in + 1) % v.deg;
            out.intent = MoveIntent::via(out.next.prt_out);
            return out;
        }
        // backtrack arrival
        out.next.prt_out = (c.prt_in + 1) % v.deg;
        const Port parent = v.holder_present ? v.stored_g1.parent : -1;
        if (parent == -1) {
            out.next.backtracking = false;
        } else if (out.next.prt_out != parent) {
            out.next.backtracking = false;
        }
        out.intent = MoveIntent::via(out.next.prt_out);
        return out;
    }
    // blocked last odd round
    if (!c.divide) {
        out = group_divide(c, v);
        out.next.divide = true;
        return out;
    }
    out.next.count_1 = c.count_1 + 1;
    if (out.next.count_1 == b.g1_cap()) {
        auto div = group_divide(c, v);
        div.next.divide = true;
        div.next.count_1 = 0;
        return div;
    }
    out.intent = MoveIntent::via(c.prt_out);  // keep trying the same edge
    return out;
}

// G2 movement on an odd round: DFS with skip-port mechanics at its root.
// Blocked together with G1 on the same port it reroutes at once; blocked
// alone it waits g2_cap odd rounds, then restarts a DFS skipping the port;
// after g2_cap restarts G1 must be dispersed and the group divides.
inline OddOut rooted_g2_odd(const RootedCore& c, const OddView& v, const RootedBounds& b) {
    OddOut out;
    out.next = c;

    auto blocked_count_path = [&]() {
        out.next.count_2 = c.count_2 + 1;
        if (out.next.count_2 < b.g2_cap()) {
            out.intent = MoveIntent::via(c.prt_out);
            return;
        }
        out.next.count_2 = 0;
        out.next.count_3 = c.count_3 + 1;
        if (out.next.count_3 < b.g2_cap()) {
            out.next.backtracking = false;
            out.next.dfs_label = c.dfs_label + 1;
            out.next.skip = c.prt_out;
            out.next.prt_out = min_available_except(v.deg, out.next.skip);
            out.intent = MoveIntent::via(out.next.prt_out);
            return;
        }
        auto div = group_divide(c, v);
        div.next.count_3 = 0;
        out = div;
    };

    if (!c.backtracking) {
        if (c.success) {
            out.next.count_2 = 0;
            if (v.settle_opportunity) {
                if (v.is_min_unsettled) return settle_here(out.next, v);
                out.next.prt_out = (c.prt_in + 1) % v.deg;
                if (out.next.prt_out == c.prt_in) out.next.backtracking = true;
                out.intent = MoveIntent::via(out.next.prt_out);
                return out;
            }
            const bool visited = v.holder_present && v.stored_g2.label == c.grp_label &&
                                 v.stored_g2.dfs_label == c.dfs_label;
            if (visited) {
                out.next.backtracking = true;
                out.next.prt_out = c.prt_in;
                out.intent = MoveIntent::via(out.next.prt_out);
                return out;
            }
            out.next.prt_out = (c.prt_in + 1) % v.deg;
            if (out.next.prt_out == c.prt_in) out.next.backtracking = true;
            out.intent = MoveIntent::via(out.next.prt_out);
            return out;
        }
        // explore + blocked
        if (v.g1_same_port) {
            const Port parent = v.holder_present ? v.stored_g2.parent : -1;
            out.next.count_2 = 0;
            if (parent == -1) {
                if (c.prt_out == v.deg - 1) {
                    out.next.skip = -1;
                    out.next.dfs_label = c.dfs_label + 1;
                    out.next.prt_out = 0;
                } else {
                    out.next.prt_out = (c.prt_out + 1) % v.deg;
                }
                out.intent = MoveIntent::via(out.next.prt_out);
                return out;
            }
            out.next.prt_out = (c.prt_out + 1) % v.deg;
            if (out.next.prt_out == c.prt_in) out.next.backtracking = true;
            out.intent = MoveIntent::via(out.next.prt_out);
            return out;
        }
        blocked_count_path();
        return out;
    }

    // backtrack state
    if (c.success) {
        out.next.count_2 = 0;
        out.next.prt_out = (c.prt_in + 1) % v.deg;
        const Port parent = v.holder_present ? v.stored_g2.parent : -1;
        if (parent == -1) {
            // my DFS root: wrapping past the last port starts the next DFS
            const Port first = min_available_except(v.deg, c.skip);
            auto fresh = [&]() {
                out.next.backtracking = false;
                out.next.skip = -1;
                out.next.prt_out = 0;
                out.next.dfs_label = c.dfs_label + 1;
            };
            if (out.next.prt_out == first) {
                fresh();
            } else if (out.next.prt_out == c.skip) {
                out.next.prt_out = (out.next.prt_out + 1) % v.deg;
                if (out.next.prt_out == first)
                    fresh();
                else
                    out.next.backtracking = false;
            } else {
                out.next.backtracking = false;
            }
            out.intent = MoveIntent::via(out.next.prt_out);
            return out;
        }
        if (out.next.prt_out != parent) out.next.backtracking = false;
        out.intent = MoveIntent::via(out.next.prt_out);
        return out;
    }
    // backtrack + blocked
    if (v.g1_same_port) {
        out.next.count_2 = 0;
        out.next.dfs_label = c.dfs_label + 1;
        out.next.backtracking = false;
        out.next.skip = c.prt_out;
        out.next.prt_out = min_available_except(v.deg, out.next.skip);
        out.intent = MoveIntent::via(out.next.prt_out);
        return out;
    }
    blocked_count_path();
    return out;
}

inline OddOut rooted_odd(const RootedCore& c, const OddView& v, const RootedBounds& b) {
    return in_g1(c) ? rooted_g1_odd(c, v, b) : rooted_g2_odd(c, v, b);
}

// Even rounds only record the previous move's outcome and entry port.
inline RootedCore rooted_even(const RootedCore& c, bool last_success, Port arrival) {
    RootedCore next = c;
    next.success = last_success;
    if (last_success && arrival >= 0) next.prt_in = arrival;
    return next;
}

// Settled-agent bookkeeping: recompute the visiting group's decision with
// the same pure function, then keep the node triples consistent with it.
// Fresh explore arrivals overwrite the triple; a restart or division rooted
// here pre-marks the root with the next dfs_label.
inline void holder_update(RootedCore& holder, const RootedCore& visitor, const OddView& vview,
                          const RootedBounds& b) {
    const bool g1 = in_g1(visitor);
    StoredTriple& slot = g1 ? holder.stored_g1 : holder.stored_g2;

    if (visitor.success && !visitor.backtracking) {
        const bool mismatch = g1 ? slot.label != visitor.grp_label
                                 : slot.label != visitor.grp_label ||
                                       slot.dfs_label != visitor.dfs_label;
        if (mismatch) slot = {visitor.prt_in, visitor.grp_label, visitor.dfs_label};
    }

    OddOut out = rooted_odd(visitor, vview, b);
    if (out.divided) {
        holder.stored_g1 = {-1, visitor.grp_label + "0", visitor.dfs_label + 1};
        holder.stored_g2 = {-1, visitor.grp_label + "1", visitor.dfs_label + 1};
    } else if (out.next.dfs_label == visitor.dfs_label + 1) {
        StoredTriple& s2 = g1 ? holder.stored_g1 : holder.stored_g2;
        s2 = {-1, visitor.grp_label, visitor.dfs_label + 1};
    }
}

}  // namespace tvd
