#pragma once

#include <cmath>
#include <memory>
#include <optional>

#include "json.hpp"
#include "tvd/adversaries.hpp"
#include "tvd/engine.hpp"

namespace tvd {

using nlohmann::json;

struct PlacementSpec {
    std::string type;  // counts | explicit | rooted | random
    std::vector<int> counts;
    std::vector<std::pair<NodeId, std::vector<AgentId>>> nodes;
    NodeId root = 0;
    std::uint64_t seed = 0;

    bool operator==(const PlacementSpec&) const = default;
};

struct ScheduleSpec {
    std::string name = "always_full";
    int ell = 1;
    std::uint64_t seed = 0;
    std::string variant = "one_hop_f2f";
    std::vector<std::vector<std::pair<NodeId, NodeId>>> absent;  // for fixed

    bool operator==(const ScheduleSpec&) const = default;
};

struct Scenario {
    std::string id = "scenario";
    std::string kind = "clique";  // clique | ring | path | custom
    int n = 0;
    std::vector<std::pair<NodeId, NodeId>> edges;      // custom footprints
    std::vector<std::vector<NodeId>> ports;            // optional custom port order
    int k = 0;
    PlacementSpec placement;
    std::string algorithm;
    ModelSpec model;
    ScheduleSpec schedule;
    int max_rounds = 1000;
    StopKind stop = StopKind::balanced;
    std::uint64_t seed = 0;
    int c_exponent = 4;  // agent ids live in [1, n^c]

    bool operator==(const Scenario&) const = default;
};

inline StopKind stop_from(const std::string& s) {
    if (s == "balanced") return StopKind::balanced;
    if (s == "all_terminated") return StopKind::all_terminated;
    if (s == "rounds") return StopKind::rounds;
    throw ValidationError("unknown stop condition: " + s);
}

inline std::string to_string(StopKind s) {
    switch (s) {
        case StopKind::balanced: return "balanced";
        case StopKind::all_terminated: return "all_terminated";
        case StopKind::rounds: return "rounds";
    }
    return "?";
}

inline ModelSpec algorithm_needs(const std::string& name) {
    if (name == "weak_disp" || name == "balanced_global")
        return {Visibility::one_hop, Communication::global, 0};
    if (name == "rooted_n_plus_1" || name == "pnq" || name == "random_walker")
        return {Visibility::zero_hop, Communication::f2f, 0};
    if (name == "greedy_hole_seeker") return {Visibility::one_hop, Communication::f2f, 0};
    throw ValidationError("unknown algorithm: " + name);
}

inline Footprint build_footprint(const Scenario& sc) {
    if (sc.kind == "custom") {
        std::vector<Edge> edges;
        for (auto [u, v] : sc.edges) edges.emplace_back(u, v);
        if (!sc.ports.empty()) return Footprint(sc.n, std::move(edges), sc.ports);
        return Footprint(sc.n, std::move(edges));
    }
    return Footprint::make(footprint_kind_from(sc.kind), sc.n);
}

inline Configuration build_placement(const Scenario& sc, const Footprint& f) {
    Configuration cfg(f.n());
    const auto& p = sc.placement;
    if (p.type == "counts") {
        if (static_cast<int>(p.counts.size()) != f.n())
            throw ValidationError("placement counts must list every node");
        AgentId next = 1;
        for (NodeId v = 0; v < f.n(); ++v)
            for (int i = 0; i < p.counts[v]; ++i) cfg.place(v, next++);
    } else if (p.type == "explicit") {
        for (const auto& [v, ids] : p.nodes) {
            if (v < 0 || v >= f.n()) throw ValidationError("placement node out of range");
            for (AgentId a : ids) cfg.place(v, a);
        }
    } else if (p.type == "rooted") {
        if (p.root < 0 || p.root >= f.n()) throw ValidationError("root node out of range");
        for (AgentId a = 1; a <= sc.k; ++a) cfg.place(p.root, a);
    } else if (p.type == "random") {
        std::mt19937_64 rng(p.seed);
        for (AgentId a = 1; a <= sc.k; ++a) cfg.place(draw_below(rng, f.n()), a);
    } else {
        throw ValidationError("unknown placement type: " + p.type);
    }
    return cfg;
}

inline std::unique_ptr<ScheduleSource> build_schedule(const Scenario& sc, const Footprint& f) {
    const auto& s = sc.schedule;
    if (s.name == "always_full") return std::make_unique<AlwaysFull>();
    if (s.name == "fixed") {
        std::vector<std::vector<EdgeId>> absent;
        for (const auto& round : s.absent) {
            std::vector<EdgeId> ids;
            for (auto [u, v] : round) {
                EdgeId id = f.edge_id(u, v);
                if (id < 0) throw ValidationError("fixed schedule names a non-edge");
                ids.push_back(id);
            }
            absent.push_back(std::move(ids));
        }
        return std::make_unique<FixedSchedule>(std::move(absent));
    }
    if (s.name == "random_one_bounded") return std::make_unique<RandomSchedule>(1, s.seed);
    if (s.name == "random_ell_bounded") return std::make_unique<RandomSchedule>(s.ell, s.seed);
    if (s.name == "temporal_split_max") return std::make_unique<TemporalSplitMax>();
    if (s.name == "temporal_split_min") return std::make_unique<TemporalSplitMin>();
    if (s.name == "ring_one_edge") return std::make_unique<RingOneEdge>(variant_from(s.variant));
    if (s.name == "path_sort")
        return std::make_unique<PathSort>(variant_from(s.variant), s.ell);
    if (s.name == "block_largest") return std::make_unique<BlockLargest>();
    throw ValidationError("unknown schedule: " + s.name);
}

// Cross-field checks beyond what construction enforces.
inline void validate_scenario(const Scenario& sc) {
    if (sc.n < 2) throw ValidationError("n must be at least 2");
    if (sc.k < 1) throw ValidationError("k must be positive");
    Footprint f = build_footprint(sc);
    Configuration cfg = build_placement(sc, f);
    if (cfg.total_agents() != sc.k)
        throw ValidationError("placement holds " + std::to_string(cfg.total_agents()) +
                              " agents, expected k = " + std::to_string(sc.k));
    const long long id_cap = static_cast<long long>(std::pow(sc.n, sc.c_exponent));
    for (NodeId v = 0; v < f.n(); ++v)
        for (AgentId a : cfg.at(v)) {
            if (a < 1) throw ValidationError("agent ids must be positive");
            if (a > id_cap)
                throw ValidationError("agent id " + std::to_string(a) + " exceeds n^c = " +
                                      std::to_string(id_cap));
        }

    ModelSpec needs = algorithm_needs(sc.algorithm);
    if (!model_covers(sc.model, needs))
        throw ValidationError(sc.algorithm + " requires at least " + to_string(needs.visibility) +
                              " visibility and " + to_string(needs.communication) +
                              " communication");

    auto rooted_at_one_node = [&] {
        int occupied = 0;
        for (NodeId v = 0; v < f.n(); ++v) occupied += cfg.count(v) > 0 ? 1 : 0;
        return occupied == 1;
    };
    if (sc.algorithm == "rooted_n_plus_1") {
        if (sc.k != sc.n + 1)
            throw ValidationError("rooted_n_plus_1 requires k = n+1");
        if (!rooted_at_one_node())
            throw ValidationError("rooted_n_plus_1 requires all agents co-located");
    }
    if (sc.algorithm == "pnq") {
        const int q = sc.k % sc.n;
        if (q != 1 && q != 2)
            throw ValidationError(
                "pnq requires k = pn+q with q in {1,2}; the case q in [3, n-1] is unsupported");
        if (!rooted_at_one_node()) throw ValidationError("pnq requires all agents co-located");
    }
}

inline json emit_scenario(const Scenario& sc) {
    json j;
    j["id"] = sc.id;
    j["footprint"] = {{"kind", sc.kind}, {"n", sc.n}};
    if (sc.kind == "custom") {
        json e = json::array();
        for (auto [u, v] : sc.edges) e.push_back({u, v});
        j["footprint"]["edges"] = e;
        if (!sc.ports.empty()) j["footprint"]["ports"] = sc.ports;
    }
    j["k"] = sc.k;
    json pl;
    pl["type"] = sc.placement.type;
    if (sc.placement.type == "counts") pl["counts"] = sc.placement.counts;
    if (sc.placement.type == "explicit") {
        json nodes = json::object();
        for (const auto& [v, ids] : sc.placement.nodes) nodes[std::to_string(v)] = ids;
        pl["nodes"] = nodes;
    }
    if (sc.placement.type == "rooted") pl["node"] = sc.placement.root;
    if (sc.placement.type == "random") pl["seed"] = sc.placement.seed;
    j["placement"] = pl;
    j["algorithm"] = sc.algorithm;
    j["model"] = {{"visibility", to_string(sc.model.visibility)},
                  {"communication", to_string(sc.model.communication)}};
    if (sc.model.communication == Communication::l_hop) j["model"]["l"] = sc.model.l;
    json sch;
    sch["name"] = sc.schedule.name;
    if (sc.schedule.name == "random_ell_bounded" || sc.schedule.name == "path_sort")
        sch["ell"] = sc.schedule.ell;
    if (sc.schedule.name.starts_with("random")) sch["seed"] = sc.schedule.seed;
    if (sc.schedule.name == "ring_one_edge" || sc.schedule.name == "path_sort")
        sch["variant"] = sc.schedule.variant;
    if (sc.schedule.name == "fixed") {
        json rounds = json::array();
        for (const auto& round : sc.schedule.absent) {
            json r = json::array();
            for (auto [u, v] : round) r.push_back({u, v});
            rounds.push_back(r);
        }
        sch["absent"] = rounds;
    }
    j["schedule"] = sch;
    j["max_rounds"] = sc.max_rounds;
    j["stop"] = to_string(sc.stop);
    j["seed"] = sc.seed;
    j["c"] = sc.c_exponent;
    return j;
}

inline Scenario parse_scenario(const json& j) {
    Scenario sc;
    sc.id = j.value("id", "scenario");
    const json& fp = j.at("footprint");
    sc.kind = fp.value("kind", "clique");
    sc.n = fp.at("n").get<int>();
    if (fp.contains("edges")) {
        sc.kind = "custom";
        for (const auto& e : fp.at("edges"))
            sc.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        if (fp.contains("ports")) sc.ports = fp.at("ports").get<std::vector<std::vector<int>>>();
    }
    sc.k = j.at("k").get<int>();
    const json& pl = j.at("placement");
    sc.placement.type = pl.at("type").get<std::string>();
    if (sc.placement.type == "counts") sc.placement.counts = pl.at("counts").get<std::vector<int>>();
    if (sc.placement.type == "explicit")
        for (const auto& [key, ids] : pl.at("nodes").items())
            sc.placement.nodes.emplace_back(std::stoi(key), ids.get<std::vector<AgentId>>());
    if (sc.placement.type == "rooted") sc.placement.root = pl.value("node", 0);
    if (sc.placement.type == "random") sc.placement.seed = pl.value("seed", 0ULL);
    sc.algorithm = j.at("algorithm").get<std::string>();
    const json& m = j.at("model");
    sc.model.visibility = visibility_from(m.at("visibility").get<std::string>());
    sc.model.communication = communication_from(m.at("communication").get<std::string>());
    sc.model.l = m.value("l", 0);
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        sc.schedule.name = s.at("name").get<std::string>();
        sc.schedule.ell = s.value("ell", 1);
        sc.schedule.seed = s.value("seed", 0ULL);
        sc.schedule.variant = s.value("variant", "one_hop_f2f");
        if (s.contains("absent"))
            for (const auto& round : s.at("absent")) {
                std::vector<std::pair<NodeId, NodeId>> r;
                for (const auto& e : round) r.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
                sc.schedule.absent.push_back(std::move(r));
            }
    }
    sc.max_rounds = j.value("max_rounds", 1000);
    sc.stop = stop_from(j.value("stop", "balanced"));
    sc.seed = j.value("seed", 0ULL);
    sc.c_exponent = j.value("c", 4);
    validate_scenario(sc);
    return sc;
}

}  // namespace tvd
