#pragma once

#include <cmath>

#include "tvd/schedule.hpp"

namespace tvd {

namespace detail {

inline std::vector<int> node_counts(const Configuration& cfg) {
    std::vector<int> c(cfg.n());
    for (NodeId v = 0; v < cfg.n(); ++v) c[v] = cfg.count(v);
    return c;
}

inline NodeId argmax_count(const std::vector<int>& counts, const std::vector<char>& allowed) {
    NodeId best = -1;
    for (NodeId v = 0; v < static_cast<int>(counts.size()); ++v)
        if (allowed[v] && (best < 0 || counts[v] > counts[best])) best = v;
    return best;
}

inline NodeId argmin_count(const std::vector<int>& counts, const std::vector<char>& allowed) {
    NodeId best = -1;
    for (NodeId v = 0; v < static_cast<int>(counts.size()); ++v)
        if (allowed[v] && (best < 0 || counts[v] < counts[best])) best = v;
    return best;
}

// clique snapshot with one node's star removed: components {iso} + K_{n-1}
inline Snapshot isolate(const Footprint& f, NodeId iso, int round) {
    Snapshot s = Snapshot::full(f, round);
    for (Port p = 0; p < f.degree(iso); ++p) s.remove(f.edge_via_port(iso, p));
    return s;
}

// components {a,b} + K_{n-2}: remove every edge between the pair and the rest
inline Snapshot pair_off(const Footprint& f, NodeId a, NodeId b, int round) {
    Snapshot s = Snapshot::full(f, round);
    for (NodeId w = 0; w < f.n(); ++w) {
        if (w == a || w == b) continue;
        s.remove(f.edge_id(a, w));
        s.remove(f.edge_id(b, w));
    }
    return s;
}

inline void require_clique(const Footprint& f, const std::string& who) {
    if (f.m() != f.n() * (f.n() - 1) / 2)
        throw ValidationError(who + " needs a clique footprint");
}

}  // namespace detail

// Alternates between isolating the most loaded node and pairing it with the
// heaviest remainder node, so a node with at least p+2 agents persists at
// every round end. Oblivious to the algorithm beyond node counts.
class TemporalSplitMax final : public ScheduleSource {
public:
    std::string name() const override { return "temporal_split_max"; }
    ScheduleClass declared_class() const override { return ScheduleClass::temporal; }

    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle&,
                  std::string* reason) override {
        auto counts = detail::node_counts(*view.placement);
        const int r = step_++;
        std::vector<char> all(f.n(), 1);
        if (r == 0) {
            detail::require_clique(f, name());
            const int n = f.n();
            const int p = view.k / n;
            const int q = view.k - p * n;
            if (n < 4) throw ValidationError(name() + " needs n >= 4");
            if (q < 3 || q > n - 1)
                throw ValidationError(name() + " needs k = pn+q with 3 <= q <= n-1");
            iso_ = detail::argmax_count(counts, all);
            if (counts[iso_] < p + 2)
                throw ValidationError(name() + " needs a node with at least p+2 agents");
            if (reason) *reason = "isolate " + std::to_string(iso_);
            return detail::isolate(f, iso_, view.round);
        }
        if (r % 2 == 1) {
            std::vector<char> rest(f.n(), 1);
            rest[iso_] = 0;
            partner_ = detail::argmax_count(counts, rest);
            if (reason)
                *reason = "pair " + std::to_string(iso_) + "," + std::to_string(partner_);
            return detail::pair_off(f, iso_, partner_, view.round);
        }
        if (counts[partner_] > counts[iso_])
            iso_ = partner_;
        else if (counts[partner_] == counts[iso_])
            iso_ = std::min(iso_, partner_);
        if (reason) *reason = "isolate " + std::to_string(iso_);
        return detail::isolate(f, iso_, view.round);
    }

private:
    int step_ = 0;
    NodeId iso_ = -1;
    NodeId partner_ = -1;
};

// Mirror construction working on the least loaded node until some node
// accumulates p+2 agents, then hands over to the max construction for good.
class TemporalSplitMin final : public ScheduleSource {
public:
    std::string name() const override { return "temporal_split_min"; }
    ScheduleClass declared_class() const override { return ScheduleClass::temporal; }

    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle& oracle,
                  std::string* reason) override {
        if (delegated_) return max_.next(f, view, oracle, reason);
        auto counts = detail::node_counts(*view.placement);
        const int r = step_++;
        std::vector<char> all(f.n(), 1);
        const int n = f.n();
        const int p = view.k / n;
        if (r == 0) {
            detail::require_clique(f, name());
            const int q = view.k - p * n;
            if (n < 6) throw ValidationError(name() + " needs n >= 6");
            if (q < 3 || q > n - 3)
                throw ValidationError(name() + " needs k = pn+q with 3 <= q <= n-3");
            if (p < 1) throw ValidationError(name() + " needs p >= 1");
            if (is_balanced(*view.placement, view.k, n))
                throw ValidationError(name() + " needs an undispersed start");
            iso_ = detail::argmin_count(counts, all);
            if (reason) *reason = "isolate " + std::to_string(iso_);
            return detail::isolate(f, iso_, view.round);
        }
        if (r % 2 == 1) {
            // a heavy node in the rest component flips us to the max game
            for (NodeId v = 0; v < n; ++v) {
                if (v != iso_ && counts[v] >= p + 2) {
                    delegated_ = true;
                    Snapshot s = max_.next(f, view, oracle, reason);
                    if (reason) *reason = "delegate " + *reason;
                    return s;
                }
            }
            std::vector<char> rest(f.n(), 1);
            rest[iso_] = 0;
            partner_ = detail::argmin_count(counts, rest);
            if (reason)
                *reason = "pair " + std::to_string(iso_) + "," + std::to_string(partner_);
            return detail::pair_off(f, iso_, partner_, view.round);
        }
        if (counts[partner_] < counts[iso_])
            iso_ = partner_;
        else if (counts[partner_] == counts[iso_])
            iso_ = std::min(iso_, partner_);
        if (reason) *reason = "isolate " + std::to_string(iso_);
        return detail::isolate(f, iso_, view.round);
    }

private:
    int step_ = 0;
    NodeId iso_ = -1;
    NodeId partner_ = -1;
    bool delegated_ = false;
    TemporalSplitMax max_;
};

enum class ImpossibilityVariant { one_hop_f2f, zero_hop_global };

inline ImpossibilityVariant variant_from(const std::string& s) {
    if (s == "one_hop_f2f") return ImpossibilityVariant::one_hop_f2f;
    if (s == "zero_hop_global") return ImpossibilityVariant::zero_hop_global;
    throw ValidationError("unknown adversary variant: " + s);
}

// On a ring with k = pn agents: keep the full ring while the precomputed
// round stays unbalanced; otherwise read the four flows around a deficient
// (or, for the global variant, surplus) node and delete the one incident
// edge whose net flow carries the sign the construction requires.
class RingOneEdge final : public ScheduleSource {
public:
    explicit RingOneEdge(ImpossibilityVariant variant) : variant_(variant) {}

    std::string name() const override { return "ring_one_edge"; }
    ScheduleClass declared_class() const override { return ScheduleClass::one_bounded; }
    int ell() const override { return 1; }

    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle& oracle,
                  std::string* reason) override {
        const int n = f.n();
        if (first_) {
            first_ = false;
            if (f.m() != n) throw ValidationError(name() + " needs a ring footprint");
            for (NodeId v = 0; v < n; ++v)
                if (f.degree(v) != 2) throw ValidationError(name() + " needs a ring footprint");
            const int min_n = variant_ == ImpossibilityVariant::one_hop_f2f ? 4 : 3;
            if (n < min_n) throw ValidationError(name() + " needs n >= " + std::to_string(min_n));
            if (view.k % n != 0) throw ValidationError(name() + " needs k = pn");
            if (is_balanced(*view.placement, view.k, n))
                throw ValidationError(name() + " needs an undispersed start");
        }
        Snapshot full = Snapshot::full(f, view.round);
        const int p = view.k / n;
        OracleStep pre = oracle(full);
        if (!is_balanced(pre.after, view.k, n)) {
            if (reason) *reason = "full";
            return full;
        }

        const bool deficient = variant_ == ImpossibilityVariant::one_hop_f2f;
        NodeId u = -1;
        for (NodeId v = 0; v < n; ++v) {
            const int c = view.placement->count(v);
            if ((deficient && c < p) || (!deficient && c > p)) {
                u = v;
                break;
            }
        }
        if (u < 0) throw ProofInvariantViolation(name() + ": no qualifying node");

        const NodeId u1 = f.neighbor_via_port(u, 0);
        const NodeId u2 = f.neighbor_via_port(u, 1);
        int x1 = 0, x2 = 0, y1 = 0, y2 = 0;  // flows u->u1, u1->u, u->u2, u2->u
        for (std::size_t i = 0; i < pre.ids->size(); ++i) {
            if (pre.intent_port[i] < 0) continue;
            const AgentId a = (*pre.ids)[i];
            NodeId from = -1;
            for (NodeId v = 0; v < n && from < 0; ++v)
                for (AgentId b : view.placement->at(v))
                    if (b == a) {
                        from = v;
                        break;
                    }
            const NodeId to = f.neighbor_via_port(from, pre.intent_port[i]);
            if (from == u && to == u1) ++x1;
            if (from == u1 && to == u) ++x2;
            if (from == u && to == u2) ++y1;
            if (from == u2 && to == u) ++y2;
        }
        EdgeId cut = -1;
        if (deficient) {
            if (y2 - y1 > 0)
                cut = f.edge_id(u, u2);
            else if (x2 - x1 > 0)
                cut = f.edge_id(u, u1);
        } else {
            if (y2 - y1 < 0)
                cut = f.edge_id(u, u2);
            else if (x2 - x1 < 0)
                cut = f.edge_id(u, u1);
        }
        if (cut < 0)
            throw ProofInvariantViolation(name() + ": no edge with the required net flow");
        full.remove(cut);
        if (reason) *reason = "cut " + std::to_string(cut);
        return full;
    }

private:
    ImpossibilityVariant variant_;
    bool first_ = true;
};

// Clique adversary keeping only a count-sorted Hamiltonian path per round:
// when even the path would flatten every node below p+2, it swaps the fourth
// path edge for the chord from the heaviest node, leaving the walkers around
// the third and fourth nodes overloaded.
class PathSort final : public ScheduleSource {
public:
    PathSort(ImpossibilityVariant variant, int ell) : variant_(variant), ell_(ell) {}

    std::string name() const override { return "path_sort"; }
    ScheduleClass declared_class() const override { return ScheduleClass::ell_bounded; }
    int ell() const override { return ell_; }
    ImpossibilityVariant variant() const { return variant_; }

    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle& oracle,
                  std::string* reason) override {
        const int n = f.n();
        const int p = view.k / n;
        if (first_) {
            first_ = false;
            detail::require_clique(f, name());
            if (ell_ < 25) throw ValidationError(name() + " needs ell >= 25");
            const int max_n = static_cast<int>(std::floor(std::sqrt(ell_)));
            if (n < 6 || n > max_n)
                throw ValidationError(name() + " needs 6 <= n <= floor(sqrt(ell))");
            const int q = view.k - p * n;
            if (q < 5 || q > n - 1)
                throw ValidationError(name() + " needs k = pn+q with 5 <= q <= n-1");
            if (view.placement->max_count() < p + 2)
                throw ValidationError(name() + " needs a node with at least p+2 agents");
        }
        // nodes by descending count, ties by index
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
            return view.placement->count(a) > view.placement->count(b);
        });
        Snapshot path{view.round, std::vector<std::uint8_t>(f.m(), 0)};
        for (int i = 0; i + 1 < n; ++i) path.add(f.edge_id(order[i], order[i + 1]));

        OracleStep pre = oracle(path);
        bool heavy = false;
        for (NodeId v = 0; v < n; ++v) heavy = heavy || pre.after.count(v) >= p + 2;
        if (heavy) {
            if (reason) *reason = "P_r";
            return path;
        }
        path.remove(f.edge_id(order[3], order[4]));
        path.add(f.edge_id(order[0], order[4]));
        if (reason) *reason = "P_r_prime";
        return path;
    }

private:
    ImpossibilityVariant variant_;
    int ell_;
    bool first_ = true;
};

// One-bounded blocker: precompute the round on the full footprint, find the
// biggest bunch of co-located agents that intend the same port, and delete
// that edge when the snapshot stays connected without it.
class BlockLargest final : public ScheduleSource {
public:
    std::string name() const override { return "block_largest"; }
    ScheduleClass declared_class() const override { return ScheduleClass::one_bounded; }
    int ell() const override { return 1; }

    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle& oracle,
                  std::string* reason) override {
        Snapshot full = Snapshot::full(f, view.round);
        OracleStep pre = oracle(full);
        // (node, port) -> weight
        std::map<std::pair<NodeId, Port>, int> weight;
        for (std::size_t i = 0; i < pre.ids->size(); ++i) {
            if (pre.intent_port[i] < 0) continue;
            const AgentId a = (*pre.ids)[i];
            for (NodeId v = 0; v < f.n(); ++v) {
                const auto& lst = view.placement->at(v);
                if (std::binary_search(lst.begin(), lst.end(), a)) {
                    ++weight[{v, pre.intent_port[i]}];
                    break;
                }
            }
        }
        std::pair<NodeId, Port> best{-1, -1};
        int best_w = 0;
        for (const auto& [key, w] : weight)
            if (w > best_w) {
                best = key;
                best_w = w;
            }
        if (best_w > 0) {
            const EdgeId e = f.edge_via_port(best.first, best.second);
            full.remove(e);
            if (is_snapshot_connected(f, full)) {
                if (reason) *reason = "block " + std::to_string(e);
                return full;
            }
            full.add(e);
        }
        if (reason) *reason = "full";
        return full;
    }
};

}  // namespace tvd
