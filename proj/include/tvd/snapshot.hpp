#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "tvd/footprint.hpp"

namespace tvd {

// Per-round present-edge set. present[id] != 0 iff footprint edge id exists
// this round.
struct Snapshot {
    int round = 0;
    std::vector<std::uint8_t> present;

    static Snapshot full(const Footprint& f, int round) {
        Snapshot s;
        s.round = round;
        s.present.assign(f.m(), 1);
        return s;
    }

    bool has(EdgeId id) const { return present[id] != 0; }
    void remove(EdgeId id) { present[id] = 0; }
    void add(EdgeId id) { present[id] = 1; }

    int present_count() const {
        return std::accumulate(present.begin(), present.end(), 0);
    }

    std::vector<EdgeId> present_ids() const {
        std::vector<EdgeId> out;
        for (EdgeId id = 0; id < static_cast<EdgeId>(present.size()); ++id)
            if (present[id]) out.push_back(id);
        return out;
    }
};

namespace detail {
// Union-find over nodes, path halving.
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};
}  // namespace detail

inline bool is_snapshot_connected(const Footprint& f, const Snapshot& s) {
    if (f.n() <= 1) return true;
    detail::Dsu dsu(f.n());
    int components = f.n();
    for (EdgeId id = 0; id < f.m(); ++id)
        if (s.has(id) && dsu.unite(f.edge(id).u, f.edge(id).v)) --components;
    return components == 1;
}

inline int missing_edge_count(const Footprint& f, const Snapshot& s) {
    return f.m() - s.present_count();
}

// component label per node under the snapshot's present edges
inline std::vector<int> snapshot_components(const Footprint& f, const Snapshot& s) {
    detail::Dsu dsu(f.n());
    for (EdgeId id = 0; id < f.m(); ++id)
        if (s.has(id)) dsu.unite(f.edge(id).u, f.edge(id).v);
    std::vector<int> label(f.n());
    for (NodeId v = 0; v < f.n(); ++v) label[v] = dsu.find(v);
    return label;
}

// BFS hop distances from src over present edges; -1 = unreachable.
inline std::vector<int> snapshot_distances(const Footprint& f, const Snapshot& s, NodeId src) {
    std::vector<int> dist(f.n(), -1);
    std::vector<NodeId> queue{src};
    dist[src] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        NodeId v = queue[qi];
        for (Port p = 0; p < f.degree(v); ++p) {
            EdgeId id = f.edge_via_port(v, p);
            if (!s.has(id)) continue;
            NodeId w = f.edge(id).other(v);
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

}  // namespace tvd
