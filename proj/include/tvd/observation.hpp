#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tvd/config.hpp"
#include "tvd/model.hpp"
#include "tvd/snapshot.hpp"

namespace tvd {

struct MoveIntent {
    bool moving = false;
    Port port = -1;

    static MoveIntent stay() { return {}; }
    static MoveIntent via(Port p) { return {true, p}; }
    bool operator==(const MoveIntent&) const = default;
};

struct NoPayload {
    bool operator==(const NoPayload&) const = default;
};

// Read access to persisted agent states by id. Co-located agents (and, under
// 1-hop visibility, neighboring ones) expose their full state through this.
template <class State>
class StateTable {
public:
    StateTable() = default;
    StateTable(const std::vector<AgentId>* ids, const std::vector<State>* states)
        : ids_(ids), states_(states) {}

    const State& operator[](AgentId a) const { return (*states_)[index_of(a)]; }

    int index_of(AgentId a) const {
        auto it = std::lower_bound(ids_->begin(), ids_->end(), a);
        return static_cast<int>(it - ids_->begin());
    }

private:
    const std::vector<AgentId>* ids_ = nullptr;
    const std::vector<State>* states_ = nullptr;
};

// Terminated agents remain on their node and are visibly inert to anyone who
// can see them.
class ActiveTable {
public:
    ActiveTable() = default;
    ActiveTable(const std::vector<AgentId>* ids, const std::vector<std::uint8_t>* flags)
        : ids_(ids), flags_(flags) {}

    bool terminated(AgentId a) const {
        if (!ids_) return false;
        auto it = std::lower_bound(ids_->begin(), ids_->end(), a);
        return (*flags_)[it - ids_->begin()] != 0;
    }

    // smallest non-terminated id in an ascending list, or -1
    AgentId min_active(std::span<const AgentId> list) const {
        for (AgentId a : list)
            if (!terminated(a)) return a;
        return -1;
    }

private:
    const std::vector<AgentId>* ids_ = nullptr;
    const std::vector<std::uint8_t>* flags_ = nullptr;
};

// Omniscient view handed out only under full visibility: the entire snapshot
// and occupancy, node indices included. Models runs that grant agents
// complete knowledge; the weaker visibilities never see node identities.
template <class State>
struct WorldView {
    const Footprint* footprint = nullptr;
    const Snapshot* snapshot = nullptr;
    const Configuration* placement = nullptr;
    StateTable<State> states;
    ActiveTable active;
};

// What one agent sees at the start of a round. Node identities never appear
// outside the full-visibility world view.
template <class State, class Payload>
struct Observation {
    int round = 0;       // engine rounds are numbered from 1
    bool odd_round = false;
    int my_degree = 0;
    bool last_move_success = true;
    Port arrival_port = -1;  // port of the current node the last successful move entered by

    std::span<const AgentId> colocated;  // ascending, includes self
    StateTable<State> states;
    ActiveTable active;

    // per-port record, populated under one_hop/full visibility only
    struct PortView {
        bool present = false;                 // rho(e_v, r) for this round
        std::span<const AgentId> occupants;   // ids across the edge, if present
    };
    std::span<const PortView> neighborhood;

    std::span<const std::pair<AgentId, Payload>> messages;

    const WorldView<State>* world = nullptr;  // full visibility only

    bool colocated_only_self() const { return colocated.size() == 1; }
};

template <class State>
struct StepOut {
    State next;
    MoveIntent intent = MoveIntent::stay();
    bool terminated = false;
};

}  // namespace tvd
