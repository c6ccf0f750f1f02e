#pragma once

#include <map>

#include "tvd/observation.hpp"

namespace tvd {

// One tuple per port of v whose edge is present this round; id_u is the
// bottom marker exactly when the port leads to a hole. Ports whose edge is
// absent carry no tuple: 1-hop visibility cannot see occupancy across them.
struct SvTuple {
    static constexpr AgentId hole = -1;  // the bottom marker
    int alpha = 0;      // agents at v, terminated bodies included
    AgentId id_v = 0;   // broadcasting (minimum active) agent at v
    Port q = -1;
    AgentId id_u = hole;

    bool operator==(const SvTuple&) const = default;
};

// What the minimum-ID agent at an occupied node broadcasts each round.
struct SvBroadcast {
    int alpha = 0;
    AgentId id_v = 0;
    std::vector<SvTuple> tuples;

    bool operator==(const SvBroadcast&) const = default;
};

// Requires one_hop (or full) visibility: per-port presence and occupants.
template <class State, class Payload>
SvBroadcast build_sv(const Observation<State, Payload>& obs) {
    SvBroadcast b;
    b.alpha = static_cast<int>(obs.colocated.size());
    b.id_v = obs.colocated.front();
    for (Port p = 0; p < static_cast<Port>(obs.neighborhood.size()); ++p) {
        const auto& pv = obs.neighborhood[p];
        if (!pv.present) continue;
        SvTuple t;
        t.alpha = b.alpha;
        t.id_v = b.id_v;
        t.q = p;
        t.id_u = pv.occupants.empty() ? SvTuple::hole : pv.occupants.front();
        b.tuples.push_back(t);
    }
    return b;
}

// Consistent partial picture of the current snapshot, reconstructed from the
// S_v broadcasts in range (or from the omniscient world view). Nodes are
// keyed by their broadcaster's id; internal node indices never leak out of
// the world-view path.
struct OccupiedMap {
    struct Node {
        AgentId min_id = 0;   // broadcaster; smallest active agent, else smallest body
        bool active = true;   // has a non-terminated agent
        int alpha = 0;
        std::vector<std::pair<Port, int>> nbrs;  // (port here, map index), port-ascending
        std::vector<Port> hole_ports;            // ports to present-but-unoccupied nodes
        int comp = -1;
    };
    std::vector<Node> nodes;  // ascending by min_id

    int size() const { return static_cast<int>(nodes.size()); }

    int find(AgentId id) const {
        for (int i = 0; i < size(); ++i)
            if (nodes[i].min_id == id) return i;
        return -1;
    }

    bool any_hole() const {
        for (const auto& nd : nodes)
            if (!nd.hole_ports.empty()) return true;
        return false;
    }

    bool any_multinode() const {
        for (const auto& nd : nodes)
            if (nd.alpha >= 2) return true;
        return false;
    }

    int total_agents() const {
        int k = 0;
        for (const auto& nd : nodes) k += nd.alpha;
        return k;
    }

    void label_components() {
        int next = 0;
        for (auto& nd : nodes) nd.comp = -1;
        for (int i = 0; i < size(); ++i) {
            if (nodes[i].comp >= 0) continue;
            std::vector<int> stack{i};
            nodes[i].comp = next;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (auto [p, w] : nodes[v].nbrs) {
                    if (nodes[w].comp < 0) {
                        nodes[w].comp = next;
                        stack.push_back(w);
                    }
                }
            }
            ++next;
        }
    }
};

template <class Payload>
OccupiedMap map_from_broadcasts(std::span<const std::pair<AgentId, Payload>> messages) {
    OccupiedMap m;
    std::map<AgentId, SvBroadcast> by_id;
    for (const auto& [sender, b] : messages) by_id.emplace(b.id_v, b);
    std::map<AgentId, int> index;
    for (const auto& [id, b] : by_id) {
        index[id] = m.size();
        OccupiedMap::Node nd;
        nd.min_id = id;
        nd.alpha = b.alpha;
        m.nodes.push_back(nd);
    }
    for (const auto& [id, b] : by_id) {
        auto& nd = m.nodes[index[id]];
        for (const SvTuple& t : b.tuples) {
            if (t.id_u == SvTuple::hole) {
                nd.hole_ports.push_back(t.q);
            } else if (auto it = index.find(t.id_u); it != index.end()) {
                nd.nbrs.emplace_back(t.q, it->second);
            }
        }
        std::sort(nd.nbrs.begin(), nd.nbrs.end());
        std::sort(nd.hole_ports.begin(), nd.hole_ports.end());
    }
    m.label_components();
    return m;
}

// Omniscient variant for runs granting complete knowledge.
template <class State>
OccupiedMap map_from_world(const WorldView<State>& w) {
    OccupiedMap m;
    const Footprint& f = *w.footprint;
    std::vector<int> map_index(f.n(), -1);
    struct Occ {
        AgentId key;
        NodeId v;
        bool active;
    };
    std::vector<Occ> occ;
    for (NodeId v = 0; v < f.n(); ++v) {
        const auto& lst = w.placement->at(v);
        if (lst.empty()) continue;
        AgentId key = w.active.min_active(lst);
        const bool active = key >= 0;
        if (!active) key = lst.front();
        occ.push_back({key, v, active});
    }
    std::sort(occ.begin(), occ.end(), [](const Occ& a, const Occ& b) { return a.key < b.key; });
    for (int i = 0; i < static_cast<int>(occ.size()); ++i) {
        map_index[occ[i].v] = i;
        OccupiedMap::Node nd;
        nd.min_id = occ[i].key;
        nd.active = occ[i].active;
        nd.alpha = w.placement->count(occ[i].v);
        m.nodes.push_back(nd);
    }
    for (const Occ& o : occ) {
        auto& nd = m.nodes[map_index[o.v]];
        for (Port p = 0; p < f.degree(o.v); ++p) {
            EdgeId e = f.edge_via_port(o.v, p);
            if (!w.snapshot->has(e)) continue;
            NodeId u = f.edge(e).other(o.v);
            if (w.placement->count(u) == 0)
                nd.hole_ports.push_back(p);
            else
                nd.nbrs.emplace_back(p, map_index[u]);
        }
        std::sort(nd.nbrs.begin(), nd.nbrs.end());
        std::sort(nd.hole_ports.begin(), nd.hole_ports.end());
    }
    m.label_components();
    return m;
}

// The slide: within each occupied component holding a multinode that reaches
// a hole through singly-occupied nodes, the chain from the lowest-id such
// multinode shifts one hop along the lexicographically smallest port
// sequence, filling the hole. Returns mover id -> port.
inline std::map<AgentId, Port> slide_moves(const OccupiedMap& m) {
    std::map<AgentId, Port> moves;
    int comp_count = 0;
    for (const auto& nd : m.nodes) comp_count = std::max(comp_count, nd.comp + 1);

    for (int c = 0; c < comp_count; ++c) {
        // multinodes ascending by min_id; map order is already id-ascending
        for (int start = 0; start < m.size(); ++start) {
            if (m.nodes[start].comp != c || m.nodes[start].alpha < 2) continue;
            // depth-first over paths through singly-occupied nodes, ports in
            // ascending order: the first hole found ends the lexicographically
            // smallest port sequence
            std::vector<int> path{start};
            std::vector<Port> ports;
            std::vector<char> on_path(m.size(), 0);
            on_path[start] = 1;
            bool found = false;

            auto dfs = [&](auto&& self, int v) -> bool {
                std::size_t ni = 0;
                std::size_t hi = 0;
                const auto& nd = m.nodes[v];
                // interleave neighbor ports and hole ports in ascending order
                while (ni < nd.nbrs.size() || hi < nd.hole_ports.size()) {
                    const bool take_hole =
                        hi < nd.hole_ports.size() &&
                        (ni >= nd.nbrs.size() || nd.hole_ports[hi] < nd.nbrs[ni].first);
                    if (take_hole) {
                        ports.push_back(nd.hole_ports[hi]);
                        return true;
                    }
                    auto [p, w] = nd.nbrs[ni++];
                    if (!on_path[w] && m.nodes[w].alpha == 1 && m.nodes[w].active) {
                        on_path[w] = 1;
                        path.push_back(w);
                        ports.push_back(p);
                        if (self(self, w)) return true;
                        on_path[w] = 0;
                        path.pop_back();
                        ports.pop_back();
                    }
                }
                return false;
            };
            found = dfs(dfs, start);
            if (!found) continue;
            for (std::size_t i = 0; i < path.size(); ++i) {
                const auto& nd = m.nodes[path[i]];
                if (!nd.active) continue;
                moves[nd.min_id] = ports[i];
            }
            break;  // one slide per component
        }
    }
    return moves;
}

}  // namespace tvd
