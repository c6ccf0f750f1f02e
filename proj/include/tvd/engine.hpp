#pragma once

#include <concepts>
#include <optional>

#include "tvd/observation.hpp"
#include "tvd/schedule.hpp"

namespace tvd {

template <class A>
concept Algorithm = requires(const A a, AgentId id, const typename A::State& st,
                             const Observation<typename A::State, typename A::Payload>& obs) {
    { a.name() } -> std::convertible_to<std::string>;
    { a.needs() } -> std::convertible_to<ModelSpec>;
    { a.initial(id) } -> std::convertible_to<typename A::State>;
    { a.communicate(id, st, obs) } -> std::convertible_to<std::optional<typename A::Payload>>;
    { a.compute(id, st, obs) } -> std::convertible_to<StepOut<typename A::State>>;
    { a.memory_bits(st) } -> std::convertible_to<int>;
};

// Move resolution: Move(p) at node v relocates the agent iff the port's edge
// is in the snapshot, otherwise it stays and the move counts as failed. Stay
// always succeeds. All moves resolve simultaneously against the same
// snapshot; nodes have no capacity limit.
struct MoveResolution {
    std::vector<NodeId> next_node;    // per agent index
    std::vector<std::uint8_t> success;
    std::vector<Port> arrival_port;   // port at the target, -1 when not relocated
};

inline MoveResolution apply_moves(const Footprint& f, const Snapshot& s,
                                  const std::vector<NodeId>& node,
                                  const std::vector<MoveIntent>& intents) {
    const int k = static_cast<int>(node.size());
    MoveResolution r;
    r.next_node = node;
    r.success.assign(k, 1);
    r.arrival_port.assign(k, -1);
    for (int i = 0; i < k; ++i) {
        if (!intents[i].moving) continue;
        const NodeId v = node[i];
        if (intents[i].port < 0 || intents[i].port >= f.degree(v))
            throw ValidationError("move intent names a port outside the footprint");
        const EdgeId e = f.edge_via_port(v, intents[i].port);
        if (s.has(e)) {
            r.next_node[i] = f.edge(e).other(v);
            r.arrival_port[i] = f.port_of_edge_at(e, r.next_node[i]);
        } else {
            r.success[i] = 0;
        }
    }
    return r;
}

// One committed round, exposed to sinks by reference; copy what you keep.
struct RoundView {
    int round = 0;
    const Snapshot* snapshot = nullptr;
    const Configuration* before = nullptr;
    const Configuration* after = nullptr;
    const std::vector<AgentId>* ids = nullptr;
    const std::vector<int>* intent_port = nullptr;        // -1 stay or terminated
    const std::vector<std::uint8_t>* success = nullptr;
    const std::vector<std::uint8_t>* terminated = nullptr;
    const std::vector<int>* memory_bits = nullptr;
    const std::string* reason = nullptr;
};

// The synchronous Communicate-Compute-Move loop for one algorithm over one
// footprint. A single run is strictly sequential; separate Simulations share
// nothing and may run in parallel.
template <Algorithm A>
class Simulation {
public:
    using State = typename A::State;
    using Payload = typename A::Payload;
    using Obs = Observation<State, Payload>;

    Simulation(A algo, Footprint f, ModelSpec model, const Configuration& start)
        : algo_(std::move(algo)), f_(std::move(f)), model_(model), cfg_(start), before_(start) {
        if (!model_covers(model_, algo_.needs()))
            throw ValidationError(algo_.name() + " requires at least visibility " +
                                  to_string(algo_.needs().visibility) + " and communication " +
                                  to_string(algo_.needs().communication));
        for (NodeId v = 0; v < f_.n(); ++v)
            for (AgentId a : start.at(v)) ids_.push_back(a);
        std::sort(ids_.begin(), ids_.end());
        if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
            throw ValidationError("duplicate agent id");
        k_ = static_cast<int>(ids_.size());
        node_.assign(k_, 0);
        for (NodeId v = 0; v < f_.n(); ++v)
            for (AgentId a : start.at(v)) node_[index_of(a)] = v;
        for (AgentId a : ids_) states_.push_back(algo_.initial(a));
        last_success_.assign(k_, 1);
        last_arrival_.assign(k_, -1);
        terminated_.assign(k_, 0);
        mem_bits_.assign(k_, 0);
        for (int i = 0; i < k_; ++i) mem_bits_[i] = algo_.memory_bits(states_[i]);
        intent_log_.assign(k_, -1);
    }

    int k() const { return k_; }
    int n() const { return f_.n(); }
    int round() const { return round_; }
    const Footprint& footprint() const { return f_; }
    const Configuration& placement() const { return cfg_; }
    const std::vector<AgentId>& ids() const { return ids_; }
    const State& state_of(AgentId a) const { return states_[index_of(a)]; }
    NodeId node_of(AgentId a) const { return node_[index_of(a)]; }
    bool terminated(AgentId a) const { return terminated_[index_of(a)] != 0; }

    bool all_terminated() const {
        for (auto t : terminated_)
            if (!t) return false;
        return true;
    }

    int index_of(AgentId a) const {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), a);
        if (it == ids_.end() || *it != a) throw ValidationError("unknown agent id");
        return static_cast<int>(it - ids_.begin());
    }

    // Observations for the round about to be played, honoring the model:
    // zero_hop sees only the co-located view, one_hop adds per-port presence
    // and occupants, full adds the world view; message range is 0 / l /
    // unbounded hops measured in this snapshot.
    struct ObsBundle {
        std::vector<std::vector<typename Obs::PortView>> port_views;  // per node
        std::vector<std::vector<std::pair<AgentId, Payload>>> scoped;
        std::vector<int> scope_of_agent;
        WorldView<State> world;
        std::vector<Obs> obs;  // per agent index; valid while the bundle and sim live
    };

    ObsBundle build_observations(const Snapshot& s) const {
        ObsBundle b;
        const int round = round_ + 1;
        StateTable<State> table(&ids_, &states_);
        ActiveTable active(&ids_, &terminated_);
        const bool see_ports = model_.visibility != Visibility::zero_hop;
        if (see_ports) {
            b.port_views.resize(f_.n());
            for (NodeId v = 0; v < f_.n(); ++v) {
                if (cfg_.count(v) == 0) continue;
                auto& pv = b.port_views[v];
                pv.resize(f_.degree(v));
                for (Port p = 0; p < f_.degree(v); ++p) {
                    const EdgeId e = f_.edge_via_port(v, p);
                    pv[p].present = s.has(e);
                    if (pv[p].present) {
                        const NodeId w = f_.edge(e).other(v);
                        pv[p].occupants = std::span<const AgentId>(cfg_.at(w));
                    }
                }
            }
        }
        if (model_.visibility == Visibility::full)
            b.world = WorldView<State>{&f_, &s, &cfg_, table, active};

        b.obs.resize(k_);
        for (int i = 0; i < k_; ++i) {
            if (terminated_[i]) continue;
            Obs& o = b.obs[i];
            o.round = round;
            o.odd_round = round % 2 == 1;
            o.my_degree = f_.degree(node_[i]);
            o.last_move_success = last_success_[i] != 0;
            o.arrival_port = last_arrival_[i];
            o.colocated = std::span<const AgentId>(cfg_.at(node_[i]));
            o.states = table;
            o.active = active;
            if (see_ports) o.neighborhood = std::span<const typename Obs::PortView>(b.port_views[node_[i]]);
            if (model_.visibility == Visibility::full) o.world = &b.world;
        }

        // Communicate: collect this round's broadcasts, then deliver within
        // range. Terminated agents stay silent.
        std::vector<std::pair<int, Payload>> sent;  // (sender index, payload)
        for (int i = 0; i < k_; ++i) {
            if (terminated_[i]) continue;
            if (auto p = algo_.communicate(ids_[i], states_[i], b.obs[i])) sent.emplace_back(i, *p);
        }
        if (!sent.empty()) {
            b.scope_of_agent.assign(k_, -1);
            if (model_.communication == Communication::f2f) {
                std::vector<int> scope_of_node(f_.n(), -1);
                for (auto& [i, p] : sent) {
                    NodeId v = node_[i];
                    if (scope_of_node[v] < 0) {
                        scope_of_node[v] = static_cast<int>(b.scoped.size());
                        b.scoped.emplace_back();
                    }
                    b.scoped[scope_of_node[v]].emplace_back(ids_[i], p);
                }
                for (int i = 0; i < k_; ++i)
                    if (!terminated_[i]) b.scope_of_agent[i] = scope_of_node[node_[i]];
            } else if (model_.communication == Communication::global) {
                auto comp = snapshot_components(f_, s);
                std::vector<int> scope_of_root(f_.n(), -1);
                for (auto& [i, p] : sent) {
                    int root = comp[node_[i]];
                    if (scope_of_root[root] < 0) {
                        scope_of_root[root] = static_cast<int>(b.scoped.size());
                        b.scoped.emplace_back();
                    }
                    b.scoped[scope_of_root[root]].emplace_back(ids_[i], p);
                }
                for (int i = 0; i < k_; ++i)
                    if (!terminated_[i]) b.scope_of_agent[i] = scope_of_root[comp[node_[i]]];
            } else {  // l_hop: per-agent delivery by snapshot distance
                std::vector<std::vector<int>> dist;
                dist.reserve(sent.size());
                for (auto& [i, p] : sent) dist.push_back(snapshot_distances(f_, s, node_[i]));
                for (int i = 0; i < k_; ++i) {
                    if (terminated_[i]) continue;
                    b.scope_of_agent[i] = static_cast<int>(b.scoped.size());
                    auto& box = b.scoped.emplace_back();
                    for (std::size_t si = 0; si < sent.size(); ++si) {
                        int d = dist[si][node_[i]];
                        if (d >= 0 && d <= model_.l)
                            box.emplace_back(ids_[sent[si].first], sent[si].second);
                    }
                }
            }
            for (int i = 0; i < k_; ++i)
                if (!terminated_[i] && b.scope_of_agent[i] >= 0)
                    b.obs[i].messages =
                        std::span<const std::pair<AgentId, Payload>>(b.scoped[b.scope_of_agent[i]]);
        }
        return b;
    }

    // Pure forward simulation of one round against a hypothetical snapshot.
    struct SimStep {
        std::vector<State> next_states;
        std::vector<MoveIntent> intents;
        std::vector<std::uint8_t> new_terminated;
        MoveResolution moves;
        Configuration after;
    };

    SimStep simulate(const Snapshot& s) const {
        SimStep out;
        auto bundle = build_observations(s);
        out.next_states = states_;
        out.intents.assign(k_, MoveIntent::stay());
        out.new_terminated.assign(terminated_.begin(), terminated_.end());
        for (int i = 0; i < k_; ++i) {
            if (terminated_[i]) continue;
            StepOut<State> st = algo_.compute(ids_[i], states_[i], bundle.obs[i]);
            out.next_states[i] = std::move(st.next);
            out.intents[i] = st.intent;
            if (st.terminated) out.new_terminated[i] = 1;
        }
        out.moves = apply_moves(f_, s, node_, out.intents);
        out.after = Configuration(f_.n());
        for (int i = 0; i < k_; ++i) out.after.place(out.moves.next_node[i], ids_[i]);
        return out;
    }

    StepOracle oracle() const {
        return [this](const Snapshot& s) {
            SimStep sim = simulate(s);
            OracleStep o;
            o.after = std::move(sim.after);
            o.intent_port.assign(k_, -1);
            o.moved.assign(k_, 0);
            for (int i = 0; i < k_; ++i) {
                if (sim.intents[i].moving) o.intent_port[i] = sim.intents[i].port;
                o.moved[i] = static_cast<std::uint8_t>(sim.moves.next_node[i] != node_[i]);
            }
            o.ids = &ids_;
            return o;
        };
    }

    // Obtain the next snapshot from the source, play one CCM round, commit.
    RoundView step(ScheduleSource& src) {
        const int round = round_ + 1;
        SystemView view{round, &cfg_, k_, f_.n()};
        reason_.clear();
        Snapshot s = src.next(f_, view, oracle(), &reason_);
        s.round = round;
        check_declared_class(f_, s, src.declared_class(), src.ell(), src.name());

        SimStep sim = simulate(s);
        before_ = cfg_;
        snap_ = std::move(s);
        for (int i = 0; i < k_; ++i) {
            intent_log_[i] = sim.intents[i].moving ? sim.intents[i].port : -1;
            node_[i] = sim.moves.next_node[i];
            last_success_[i] = sim.moves.success[i];
            last_arrival_[i] = sim.moves.arrival_port[i];
            terminated_[i] = sim.new_terminated[i];
            mem_bits_[i] = algo_.memory_bits(sim.next_states[i]);
        }
        states_ = std::move(sim.next_states);
        success_log_.assign(last_success_.begin(), last_success_.end());
        cfg_ = std::move(sim.after);
        round_ = round;

        RoundView rv;
        rv.round = round;
        rv.snapshot = &snap_;
        rv.before = &before_;
        rv.after = &cfg_;
        rv.ids = &ids_;
        rv.intent_port = &intent_log_;
        rv.success = &success_log_;
        rv.terminated = &terminated_;
        rv.memory_bits = &mem_bits_;
        rv.reason = &reason_;
        return rv;
    }

private:
    A algo_;
    Footprint f_;
    ModelSpec model_;
    Configuration cfg_;
    Configuration before_;
    Snapshot snap_;
    std::vector<AgentId> ids_;
    std::vector<NodeId> node_;
    std::vector<State> states_;
    std::vector<std::uint8_t> last_success_;
    std::vector<Port> last_arrival_;
    std::vector<std::uint8_t> terminated_;
    std::vector<int> mem_bits_;
    std::vector<int> intent_log_;
    std::vector<std::uint8_t> success_log_;
    std::string reason_;
    int k_ = 0;
    int round_ = 0;
};

enum class StopKind { balanced, all_terminated, rounds };

enum class Outcome {
    balanced,
    terminated_balanced,
    terminated_unbalanced,
    timeout,
    adversary_class_violation,
};

inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::balanced: return "balanced";
        case Outcome::terminated_balanced: return "terminated_balanced";
        case Outcome::terminated_unbalanced: return "terminated_unbalanced";
        case Outcome::timeout: return "timeout";
        case Outcome::adversary_class_violation: return "adversary_class_violation";
    }
    return "?";
}

struct RunResult {
    Outcome outcome = Outcome::timeout;
    int rounds = 0;
    std::string error;
};

// Round loop: stops when the stop predicate fires, every agent terminated,
// or max_rounds elapsed (trace flagged timeout). The sink sees every round.
template <Algorithm A, class Sink>
RunResult run_rounds(Simulation<A>& sim, ScheduleSource& src, StopKind stop, int max_rounds,
                     Sink&& sink) {
    RunResult res;
    for (int r = 1; r <= max_rounds; ++r) {
        try {
            RoundView rv = sim.step(src);
            sink(rv);
        } catch (const ClassViolation& e) {
            res.outcome = Outcome::adversary_class_violation;
            res.rounds = r;
            res.error = e.what();
            return res;
        }
        res.rounds = r;
        if (sim.all_terminated()) {
            res.outcome = is_balanced(sim.placement(), sim.k(), sim.n())
                              ? Outcome::terminated_balanced
                              : Outcome::terminated_unbalanced;
            return res;
        }
        if (stop == StopKind::balanced && is_balanced(sim.placement(), sim.k(), sim.n())) {
            res.outcome = Outcome::balanced;
            return res;
        }
    }
    res.outcome = Outcome::timeout;
    res.rounds = max_rounds;
    return res;
}

}  // namespace tvd
