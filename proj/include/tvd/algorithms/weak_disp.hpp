#pragma once

#include "tvd/algorithms/sv.hpp"
#include "tvd/engine.hpp"

namespace tvd {

// Base slide subroutine as a standalone algorithm: every round the minimum
// active agent at each occupied node broadcasts S_v, everyone reconstructs
// the occupied components, and each component with a multinode and a
// reachable hole shifts one chain of agents a hop toward the hole. Agents
// terminate once their component has no multinode.
class WeakDisp {
public:
    struct State {
        AgentId id = 0;
        bool operator==(const State&) const = default;
    };
    using Payload = SvBroadcast;

    explicit WeakDisp(int k) : k_(k) {}

    std::string name() const { return "weak_disp"; }
    ModelSpec needs() const { return {Visibility::one_hop, Communication::global, 0}; }
    State initial(AgentId id) const { return {id}; }

    template <class Obs>
    std::optional<Payload> communicate(AgentId id, const State&, const Obs& obs) const {
        if (obs.world) return std::nullopt;  // omniscient runs skip broadcasts
        if (obs.active.min_active(obs.colocated) != id) return std::nullopt;
        return build_sv(obs);
    }

    template <class Obs>
    StepOut<State> compute(AgentId id, const State& st, const Obs& obs) const {
        OccupiedMap m = obs.world ? map_from_world(*obs.world)
                                  : map_from_broadcasts(obs.messages);
        const int mine = m.find(obs.active.min_active(obs.colocated));
        auto moves = slide_moves(m);
        if (auto it = moves.find(id); it != moves.end())
            return {st, MoveIntent::via(it->second)};
        if (mine >= 0) {
            bool multinode_here = false;
            for (const auto& nd : m.nodes)
                if (nd.comp == m.nodes[mine].comp && nd.alpha >= 2) multinode_here = true;
            if (!multinode_here) return {st, MoveIntent::stay(), true};
        }
        return {st};
    }

    int memory_bits(const State&) const { return bit_width_for(k_); }

private:
    int k_;
};

}  // namespace tvd
