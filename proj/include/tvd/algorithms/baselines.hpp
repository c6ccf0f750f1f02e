#pragma once

#include "tvd/engine.hpp"

namespace tvd {

namespace detail {
// splitmix64; cheap stateless per-(agent, round) pseudo-randomness
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e9b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Seeded deterministic walker: every round each agent moves through a
// pseudo-random port. A floor baseline for the impossibility batteries.
class RandomWalker {
public:
    struct State {
        bool operator==(const State&) const = default;
    };
    using Payload = NoPayload;

    explicit RandomWalker(std::uint64_t seed) : seed_(seed) {}

    std::string name() const { return "random_walker"; }
    ModelSpec needs() const { return {Visibility::zero_hop, Communication::f2f, 0}; }
    State initial(AgentId) const { return {}; }

    template <class Obs>
    std::optional<Payload> communicate(AgentId, const State&, const Obs&) const {
        return std::nullopt;
    }

    template <class Obs>
    StepOut<State> compute(AgentId id, const State& st, const Obs& obs) const {
        auto h = detail::mix(seed_ ^ detail::mix(static_cast<std::uint64_t>(id)) ^
                             static_cast<std::uint64_t>(obs.round) * 0x9e3779b97f4a7c15ULL);
        return {st, MoveIntent::via(static_cast<Port>(h % obs.my_degree))};
    }

    int memory_bits(const State&) const { return 0; }

private:
    std::uint64_t seed_;
};

// Greedy hole-seeker under 1-hop visibility: surplus agents hop into an
// adjacent hole when they see one, otherwise surplus agents drift
// pseudo-randomly. Keeps exactly one resident per node once counts allow.
class GreedyHoleSeeker {
public:
    struct State {
        bool operator==(const State&) const = default;
    };
    using Payload = NoPayload;

    explicit GreedyHoleSeeker(std::uint64_t seed) : seed_(seed) {}

    std::string name() const { return "greedy_hole_seeker"; }
    ModelSpec needs() const { return {Visibility::one_hop, Communication::f2f, 0}; }
    State initial(AgentId) const { return {}; }

    template <class Obs>
    std::optional<Payload> communicate(AgentId, const State&, const Obs&) const {
        return std::nullopt;
    }

    template <class Obs>
    StepOut<State> compute(AgentId id, const State& st, const Obs& obs) const {
        if (obs.colocated.size() <= 1) return {st};
        // the minimum id stays and anchors the node
        if (obs.colocated.front() == id) return {st};
        int rank = 0;
        for (AgentId a : obs.colocated) {
            if (a == id) break;
            ++rank;
        }
        // surplus agents take the empty neighbors in port order, one each
        int holes_seen = 0;
        for (Port p = 0; p < static_cast<Port>(obs.neighborhood.size()); ++p) {
            const auto& pv = obs.neighborhood[p];
            if (!pv.present || !pv.occupants.empty()) continue;
            ++holes_seen;
            if (holes_seen == rank) return {st, MoveIntent::via(p)};
        }
        auto h = detail::mix(seed_ ^ detail::mix(static_cast<std::uint64_t>(id)) ^
                             static_cast<std::uint64_t>(obs.round) * 0x517cc1b727220a95ULL);
        return {st, MoveIntent::via(static_cast<Port>(h % obs.my_degree))};
    }

    int memory_bits(const State&) const { return 0; }

private:
    std::uint64_t seed_;
};

}  // namespace tvd
