#pragma once

#include "tvd/algorithms/sv.hpp"
#include "tvd/engine.hpp"

namespace tvd {

// k-balanced dispersion with 1-hop visibility and global communication.
// Two phases per agent flag P: while P=0 the slide subroutine kills holes
// (or everyone terminates when a hole exists but no multinode does); once no
// hole is heard anywhere P flips to 1 and one agent per round walks the
// lexicographically shortest max->min path until every count sits between
// floor(k1/n1) and ceil(k1/n1). Non-minimum agents recompute the minimum
// agent's decision from the same information instead of exchanging anything.
class BalancedGlobal {
public:
    struct State {
        AgentId id = 0;
        bool P = false;  // monotone 0 -> 1
        bool operator==(const State&) const = default;
    };
    using Payload = SvBroadcast;

    explicit BalancedGlobal(int k) : k_(k) {}

    std::string name() const { return "balanced_global"; }
    ModelSpec needs() const { return {Visibility::one_hop, Communication::global, 0}; }
    State initial(AgentId id) const { return {id, false}; }

    template <class Obs>
    std::optional<Payload> communicate(AgentId id, const State&, const Obs& obs) const {
        if (obs.world) return std::nullopt;
        if (obs.active.min_active(obs.colocated) != id) return std::nullopt;
        return build_sv(obs);
    }

    template <class Obs>
    StepOut<State> compute(AgentId id, const State& st, const Obs& obs) const {
        OccupiedMap m = obs.world ? map_from_world(*obs.world)
                                  : map_from_broadcasts(obs.messages);
        const AgentId my_min = obs.active.min_active(obs.colocated);
        const int mine = m.find(my_min);

        if (!st.P) {
            bool hole = false, multi = false;
            for (const auto& nd : m.nodes) {
                hole = hole || !nd.hole_ports.empty();
                multi = multi || nd.alpha >= 2;
            }
            if (hole) {
                if (multi) {
                    auto moves = slide_moves(m);
                    if (auto it = moves.find(id); it != moves.end())
                        return {st, MoveIntent::via(it->second)};
                    return {st};
                }
                return {st, MoveIntent::stay(), true};
            }
            return {State{st.id, true}};
        }

        // P = 1: balance over the heard occupied set
        const int n1 = m.size();
        if (n1 == 0) return {st};
        const int k1 = m.total_agents();
        const int big = (k1 + n1 - 1) / n1;
        const int low = k1 / n1;
        int x = 0, y = INT32_MAX;
        for (const auto& nd : m.nodes) {
            x = std::max(x, nd.alpha);
            y = std::min(y, nd.alpha);
        }
        if (x <= big && y >= low) return {st, MoveIntent::stay(), true};

        // u1: max-count node whose minimum agent id is smallest; w1 likewise
        // among min-count nodes. Map order is id-ascending, so first match wins.
        int u1 = -1, w1 = -1;
        for (int i = 0; i < m.size(); ++i) {
            if (m.nodes[i].alpha == x && m.nodes[i].active && u1 < 0) u1 = i;
            if (m.nodes[i].alpha == y && w1 < 0) w1 = i;
        }
        if (u1 < 0 || w1 < 0 || u1 == w1) return {st};

        auto path = shortest_lex_path(m, u1, w1);
        if (path.nodes.empty()) return {st};  // unreachable under a split

        // the chain shifts forward: the minimum agent at every path node but
        // the last moves to the next node
        if (mine >= 0 && my_min == id) {
            for (std::size_t j = 0; j + 1 < path.nodes.size(); ++j) {
                if (path.nodes[j] == mine) return {st, MoveIntent::via(path.ports[j])};
            }
        }
        return {st};
    }

    int memory_bits(const State&) const { return bit_width_for(k_) + 1; }

private:
    struct LexPath {
        std::vector<int> nodes;  // map indices, u1 first
        std::vector<Port> ports;
    };

    // BFS distances, then the port-greedy walk: among shortest paths this
    // selects the lexicographically smallest outgoing-port sequence.
    static LexPath shortest_lex_path(const OccupiedMap& m, int u1, int w1) {
        std::vector<int> dist(m.size(), -1);
        std::vector<int> queue{w1};
        dist[w1] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (auto [p, w] : m.nodes[v].nbrs) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        LexPath out;
        if (dist[u1] < 0) return out;
        int at = u1;
        out.nodes.push_back(at);
        while (at != w1) {
            for (auto [p, w] : m.nodes[at].nbrs) {
                if (dist[w] == dist[at] - 1) {
                    out.ports.push_back(p);
                    out.nodes.push_back(w);
                    at = w;
                    break;
                }
            }
        }
        return out;
    }

    int k_;
};

}  // namespace tvd
