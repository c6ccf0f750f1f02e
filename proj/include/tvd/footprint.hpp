#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "tvd/core.hpp"

namespace tvd {

// Undirected edge, endpoints normalized so u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

    NodeId other(NodeId w) const { return w == u ? v : u; }
    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

enum class FootprintKind { clique, ring, path, custom };

// Static port-labeled simple graph underlying a time-varying graph.
// Nodes carry internal indices 0..n-1 for the simulator only; agents never
// see them. Each node labels its incident edges with ports 0..deg(v)-1.
class Footprint {
public:
    // kind in {clique, ring, path} with canonical ports: at node v, incident
    // edges sorted by neighbor index get ports 0,1,...
    static Footprint make(FootprintKind kind, int n) {
        if (n < 2) throw ValidationError("footprint needs n >= 2");
        std::vector<Edge> edges;
        switch (kind) {
            case FootprintKind::clique:
                for (NodeId u = 0; u < n; ++u)
                    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
                break;
            case FootprintKind::ring:
                if (n < 3) throw ValidationError("ring needs n >= 3");
                for (NodeId u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
                break;
            case FootprintKind::path:
                for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
                break;
            case FootprintKind::custom:
                throw ValidationError("custom footprint needs an explicit edge list");
        }
        return Footprint(n, std::move(edges));
    }

    // Explicit edge list, canonical ports.
    Footprint(int n, std::vector<Edge> edges) : n_(n) {
        std::sort(edges.begin(), edges.end());
        for (const Edge& e : edges) {
            if (e.u == e.v) throw ValidationError("self-loop in footprint");
            if (e.u < 0 || e.v >= n_) throw ValidationError("edge endpoint out of range");
        }
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw ValidationError("duplicate edge in footprint");
        edges_ = std::move(edges);
        build_ports({});
    }

    // Explicit ports: ports[v] lists neighbors of v in port order.
    Footprint(int n, std::vector<Edge> edges, const std::vector<std::vector<NodeId>>& ports)
        : n_(n) {
        std::sort(edges.begin(), edges.end());
        edges_ = std::move(edges);
        build_ports(ports);
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_[id]; }

    int degree(NodeId v) const { return static_cast<int>(port_edge_[v].size()); }

    // Edge reached through port p of node v.
    EdgeId edge_via_port(NodeId v, Port p) const {
        if (p < 0 || p >= degree(v)) throw ValidationError("port out of range");
        return port_edge_[v][p];
    }

    NodeId neighbor_via_port(NodeId v, Port p) const { return edges_[edge_via_port(v, p)].other(v); }

    // Local label of edge `id` at endpoint `v`; the port an agent arrives by.
    Port port_of_edge_at(EdgeId id, NodeId v) const {
        return v == edges_[id].u ? edge_ports_[id].first : edge_ports_[id].second;
    }

    // Port of v whose edge leads to neighbor u; -1 if not adjacent.
    Port port_to(NodeId v, NodeId u) const {
        for (Port p = 0; p < degree(v); ++p)
            if (neighbor_via_port(v, p) == u) return p;
        return -1;
    }

    EdgeId edge_id(NodeId a, NodeId b) const {
        Edge e(a, b);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
        if (it == edges_.end() || !(*it == e)) return -1;
        return static_cast<EdgeId>(it - edges_.begin());
    }

    // Port order at each node as a neighbor list; the serializable form.
    std::vector<std::vector<NodeId>> port_table() const {
        std::vector<std::vector<NodeId>> t(n_);
        for (NodeId v = 0; v < n_; ++v)
            for (Port p = 0; p < degree(v); ++p) t[v].push_back(neighbor_via_port(v, p));
        return t;
    }

    // Same graph with each node's port order permuted by a seeded shuffle.
    // The port labels carry no global structure, so tests exercise checkers
    // and algorithms under arbitrary labelings.
    template <class Rng>
    Footprint with_shuffled_ports(Rng& rng) const {
        auto table = port_table();
        for (auto& nbrs : table) {
            for (int i = static_cast<int>(nbrs.size()) - 1; i > 0; --i) {
                int j = draw_below(rng, i + 1);
                std::swap(nbrs[i], nbrs[j]);
            }
        }
        return Footprint(n_, edges_, table);
    }

private:
    void build_ports(const std::vector<std::vector<NodeId>>& explicit_ports) {
        port_edge_.assign(n_, {});
        if (explicit_ports.empty()) {
            // canonical: neighbors ascending
            std::vector<std::vector<std::pair<NodeId, EdgeId>>> inc(n_);
            for (EdgeId id = 0; id < m(); ++id) {
                inc[edges_[id].u].emplace_back(edges_[id].v, id);
                inc[edges_[id].v].emplace_back(edges_[id].u, id);
            }
            for (NodeId v = 0; v < n_; ++v) {
                std::sort(inc[v].begin(), inc[v].end());
                for (auto& [nbr, id] : inc[v]) port_edge_[v].push_back(id);
            }
        } else {
            if (static_cast<int>(explicit_ports.size()) != n_)
                throw ValidationError("port table size mismatch");
            for (NodeId v = 0; v < n_; ++v) {
                for (NodeId nbr : explicit_ports[v]) {
                    EdgeId id = edge_id(v, nbr);
                    if (id < 0) throw ValidationError("port table names a non-edge");
                    port_edge_[v].push_back(id);
                }
            }
        }
        // bijectivity: every incident edge appears exactly once per endpoint
        std::vector<int> seen(m(), 0);
        for (NodeId v = 0; v < n_; ++v) {
            for (EdgeId id : port_edge_[v]) {
                if (edges_[id].u != v && edges_[id].v != v)
                    throw ValidationError("port maps to a non-incident edge");
                ++seen[id];
            }
        }
        for (EdgeId id = 0; id < m(); ++id)
            if (seen[id] != 2) throw ValidationError("port labeling is not a bijection");
        edge_ports_.assign(m(), {-1, -1});
        for (NodeId v = 0; v < n_; ++v) {
            for (Port p = 0; p < degree(v); ++p) {
                EdgeId id = port_edge_[v][p];
                (edges_[id].u == v ? edge_ports_[id].first : edge_ports_[id].second) = p;
            }
        }
    }

    int n_ = 0;
    std::vector<Edge> edges_;                  // sorted; index = EdgeId
    std::vector<std::vector<EdgeId>> port_edge_;  // [v][port] -> EdgeId
    std::vector<std::pair<Port, Port>> edge_ports_;  // [id] -> (port at u, port at v)
};

inline FootprintKind footprint_kind_from(const std::string& s) {
    if (s == "clique") return FootprintKind::clique;
    if (s == "ring") return FootprintKind::ring;
    if (s == "path") return FootprintKind::path;
    throw ValidationError("unknown footprint kind: " + s);
}

}  // namespace tvd
