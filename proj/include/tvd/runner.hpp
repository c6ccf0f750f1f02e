#pragma once

#include <ostream>

#include "tvd/algorithms/balanced_global.hpp"
#include "tvd/algorithms/baselines.hpp"
#include "tvd/algorithms/pnq.hpp"
#include "tvd/algorithms/rooted.hpp"
#include "tvd/algorithms/weak_disp.hpp"
#include "tvd/scenario.hpp"
#include "tvd/trace.hpp"

namespace tvd {

struct RunSummary {
    std::string scenario_id;
    int n = 0, k = 0, p = 0, q = 0;
    std::string algorithm;
    std::string adversary;
    Outcome outcome = Outcome::timeout;
    int rounds = 0;
    int max_memory_bits = 0;
    std::vector<std::pair<int, int>> holes_multinodes;  // per round
    std::uint64_t digest = 0;
    std::string error;
};

// run a prepared scenario under a chosen algorithm instance
template <Algorithm A>
RunSummary run_with(const A& algo, const Scenario& sc, Trace* trace_out) {
    Footprint f = build_footprint(sc);
    Configuration start = build_placement(sc, f);
    auto src = build_schedule(sc, f);
    Simulation<A> sim(algo, f, sc.model, start);

    RunSummary s;
    s.scenario_id = sc.id;
    s.n = sc.n;
    s.k = sc.k;
    s.p = sc.k / sc.n;
    s.q = sc.k % sc.n;
    s.algorithm = sc.algorithm;
    s.adversary = src->name();
    if (trace_out) trace_out->ids = sim.ids();

    TraceHasher hash;
    auto res = run_rounds(sim, *src, sc.stop, sc.max_rounds, [&](const RoundView& rv) {
        hash.absorb(rv);
        s.holes_multinodes.emplace_back(rv.after->holes(), rv.after->multinodes());
        for (int b : *rv.memory_bits) s.max_memory_bits = std::max(s.max_memory_bits, b);
        if (trace_out) trace_out->rounds.push_back(make_record(rv));
    });
    s.outcome = res.outcome;
    s.rounds = res.rounds;
    s.error = res.error;
    s.digest = hash.digest();
    if (trace_out) trace_out->timeout = res.outcome == Outcome::timeout;
    return s;
}

template <class F>
auto with_algorithm(const Scenario& sc, F&& f) {
    if (sc.algorithm == "weak_disp") return f(WeakDisp(sc.k));
    if (sc.algorithm == "balanced_global") return f(BalancedGlobal(sc.k));
    if (sc.algorithm == "rooted_n_plus_1") return f(Rooted(sc.n));
    if (sc.algorithm == "pnq") return f(Pnq(sc.n));
    if (sc.algorithm == "random_walker") return f(RandomWalker(sc.seed));
    if (sc.algorithm == "greedy_hole_seeker") return f(GreedyHoleSeeker(sc.seed));
    throw ValidationError("unknown algorithm: " + sc.algorithm);
}

inline RunSummary run_experiment(const Scenario& sc, Trace* trace_out = nullptr) {
    return with_algorithm(sc, [&](const auto& algo) { return run_with(algo, sc, trace_out); });
}

// one line-delimited record per round; key order is alphabetical, so equal
// traces serialize byte-identically
inline void emit_trace(const Trace& t, std::ostream& out) {
    for (const auto& rec : t.rounds) {
        json j;
        j["round"] = rec.round;
        j["present"] = rec.present;
        j["before"] = rec.before;
        j["after"] = rec.after;
        j["intents"] = rec.intent_port;
        j["success"] = rec.success;
        j["mem"] = rec.memory_bits;
        j["terminated"] = rec.terminated;
        if (!rec.reason.empty()) j["reason"] = rec.reason;
        out << j.dump() << "\n";
    }
}

inline void emit_summary_csv(const std::vector<RunSummary>& rows, std::ostream& out) {
    out << "scenario_id,n,k,p,q,algorithm,adversary,rounds,outcome,max_memory_bits,trace_digest\n";
    for (const auto& s : rows) {
        out << s.scenario_id << ',' << s.n << ',' << s.k << ',' << s.p << ',' << s.q << ','
            << s.algorithm << ',' << s.adversary << ',' << s.rounds << ',' << to_string(s.outcome)
            << ',' << s.max_memory_bits << ',' << s.digest << "\n";
    }
}

struct VerifyReport {
    std::string schedule_class;
    int rounds_checked = 0;
    std::vector<int> failing_rounds;
    bool pass() const { return failing_rounds.empty(); }
};

// realize the scenario's schedule for a prefix and check the declared class
// round by round (temporal classes are checked as journey existence within
// the horizon from every start round the prefix can cover)
inline VerifyReport verify_schedule(const Scenario& sc, int prefix_rounds, int horizon = 3) {
    Footprint f = build_footprint(sc);
    std::vector<Snapshot> prefix;
    Scenario run_sc = sc;
    run_sc.max_rounds = prefix_rounds;
    run_sc.stop = StopKind::rounds;
    with_algorithm(run_sc, [&](const auto& algo) {
        Simulation<std::decay_t<decltype(algo)>> sim(algo, f, run_sc.model,
                                                     build_placement(run_sc, f));
        auto src = build_schedule(run_sc, f);
        for (int r = 0; r < prefix_rounds && !sim.all_terminated(); ++r) {
            auto rv = sim.step(*src);
            prefix.push_back(*rv.snapshot);
        }
        return 0;
    });

    VerifyReport rep;
    auto src = build_schedule(sc, f);
    rep.rounds_checked = static_cast<int>(prefix.size());
    switch (src->declared_class()) {
        case ScheduleClass::one_bounded:
        case ScheduleClass::ell_bounded: {
            const int bound = src->declared_class() == ScheduleClass::one_bounded ? 1 : src->ell();
            rep.schedule_class = src->declared_class() == ScheduleClass::one_bounded
                                     ? "one_bounded"
                                     : "ell_bounded(" + std::to_string(bound) + ")";
            for (const Snapshot& s : prefix) {
                if (missing_edge_count(f, s) > bound || !is_snapshot_connected(f, s))
                    rep.failing_rounds.push_back(s.round);
            }
            break;
        }
        case ScheduleClass::temporal: {
            rep.schedule_class = "temporal(horizon " + std::to_string(horizon) + ")";
            const int base = prefix.empty() ? 1 : prefix.front().round;
            const int last_start = base + static_cast<int>(prefix.size()) - 1 - horizon;
            for (int r = base; r <= last_start; ++r) {
                if (!check_temporal_connectivity(f, prefix, r, r, horizon))
                    rep.failing_rounds.push_back(r);
            }
            break;
        }
        case ScheduleClass::unchecked:
            rep.schedule_class = "unchecked";
            break;
    }
    return rep;
}

inline int exit_code_for(const RunSummary& s) {
    switch (s.outcome) {
        case Outcome::balanced:
        case Outcome::terminated_balanced: return 0;
        case Outcome::timeout:
        case Outcome::terminated_unbalanced: return 2;
        case Outcome::adversary_class_violation: return 4;
    }
    return 2;
}

}  // namespace tvd
