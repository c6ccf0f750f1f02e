#pragma once

#include <optional>
#include <span>

#include "tvd/snapshot.hpp"

namespace tvd {

// Temporally ordered walk: edge steps at strictly increasing rounds, each
// edge present in its round's snapshot. The empty journey stands for u = u.
struct Journey {
    struct Step {
        EdgeId edge;
        int round;
    };
    std::vector<Step> steps;

    bool empty() const { return steps.empty(); }
    int arrival_round(int start_round) const {
        return steps.empty() ? start_round - 1 : steps.back().round;
    }
};

// Checks the journey definition against a realized prefix: rounds strictly
// increase, endpoints chain from u to v, every edge is present when used.
inline bool journey_valid(const Footprint& f, std::span<const Snapshot> prefix, NodeId u,
                          NodeId v, const Journey& j) {
    NodeId at = u;
    int last_round = -1;
    for (const auto& st : j.steps) {
        if (st.round <= last_round) return false;
        const int idx = st.round - (prefix.empty() ? 0 : prefix.front().round);
        if (idx < 0 || idx >= static_cast<int>(prefix.size())) return false;
        if (!prefix[idx].has(st.edge)) return false;
        const Edge& e = f.edge(st.edge);
        if (e.u != at && e.v != at) return false;
        at = e.other(at);
        last_round = st.round;
    }
    return at == v;
}

// Earliest-arrival journey from u to v with all steps at rounds >= r, found
// by a sweep over the time-expanded graph: one edge per round, arrivals at
// round t can move from round t+1 on.
inline std::optional<Journey> find_journey(const Footprint& f, std::span<const Snapshot> prefix,
                                           NodeId u, NodeId v, int r) {
    if (u == v) return Journey{};
    if (prefix.empty()) return std::nullopt;
    const int base = prefix.front().round;
    std::vector<int> arrival(f.n(), INT32_MAX);
    std::vector<Journey::Step> via(f.n(), {-1, -1});
    std::vector<NodeId> pred(f.n(), -1);
    arrival[u] = r - 1;
    for (int idx = std::max(0, r - base); idx < static_cast<int>(prefix.size()); ++idx) {
        const Snapshot& s = prefix[idx];
        const int t = base + idx;
        if (t < r) continue;
        // relax from the pre-round reachable set only: a journey uses at most
        // one edge per round
        std::vector<std::pair<NodeId, NodeId>> updates;  // (to, from)
        for (EdgeId id = 0; id < f.m(); ++id) {
            if (!s.has(id)) continue;
            const Edge& e = f.edge(id);
            if (arrival[e.u] < t && arrival[e.v] > t) updates.emplace_back(e.v, e.u);
            if (arrival[e.v] < t && arrival[e.u] > t) updates.emplace_back(e.u, e.v);
        }
        for (auto [to, from] : updates) {
            if (arrival[to] > t) {
                arrival[to] = t;
                via[to] = {f.edge_id(from, to), t};
                pred[to] = from;
            }
        }
        if (arrival[v] <= t) break;
    }
    if (arrival[v] == INT32_MAX) return std::nullopt;
    Journey j;
    for (NodeId at = v; at != u; at = pred[at]) j.steps.push_back(via[at]);
    std::reverse(j.steps.begin(), j.steps.end());
    return j;
}

// True iff for every ordered pair (u,v) and every start round in
// [window_lo, window_hi], a journey exists arriving by start + horizon.
// Only a statement about the given prefix, never about the infinite schedule.
inline bool check_temporal_connectivity(const Footprint& f, std::span<const Snapshot> prefix,
                                        int window_lo, int window_hi, int horizon) {
    if (prefix.empty()) return false;
    const int base = prefix.front().round;
    if (window_hi + horizon > base + static_cast<int>(prefix.size()) - 1)
        throw ValidationError("prefix too short for the requested window and horizon");
    for (int r = window_lo; r <= window_hi; ++r) {
        for (NodeId u = 0; u < f.n(); ++u) {
            for (NodeId v = 0; v < f.n(); ++v) {
                if (u == v) continue;
                auto j = find_journey(f, prefix, u, v, r);
                if (!j || j->arrival_round(r) > r + horizon) return false;
            }
        }
    }
    return true;
}

// True iff every snapshot in the prefix is connected and misses at most ell
// footprint edges.
inline bool check_ell_bounded(const Footprint& f, std::span<const Snapshot> prefix, int ell) {
    for (const Snapshot& s : prefix) {
        if (missing_edge_count(f, s) > ell) return false;
        if (!is_snapshot_connected(f, s)) return false;
    }
    return true;
}

}  // namespace tvd
