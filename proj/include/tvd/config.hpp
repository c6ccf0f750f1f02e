#pragma once

#include <algorithm>
#include <vector>

#include "tvd/core.hpp"

namespace tvd {

// Placement of agent ids on nodes at a round boundary. Per-node lists are
// kept ascending so equal placements serialize identically.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(int n) : at_(n) {}

    int n() const { return static_cast<int>(at_.size()); }

    const std::vector<AgentId>& at(NodeId v) const { return at_[v]; }
    int count(NodeId v) const { return static_cast<int>(at_[v].size()); }

    void place(NodeId v, AgentId a) {
        auto& lst = at_[v];
        lst.insert(std::lower_bound(lst.begin(), lst.end(), a), a);
    }

    void remove(NodeId v, AgentId a) {
        auto& lst = at_[v];
        auto it = std::lower_bound(lst.begin(), lst.end(), a);
        if (it == lst.end() || *it != a) throw ValidationError("agent not at node");
        lst.erase(it);
    }

    int total_agents() const {
        int k = 0;
        for (const auto& lst : at_) k += static_cast<int>(lst.size());
        return k;
    }

    int holes() const {
        int h = 0;
        for (const auto& lst : at_) h += lst.empty() ? 1 : 0;
        return h;
    }

    int multinodes() const {
        int m = 0;
        for (const auto& lst : at_) m += lst.size() >= 2 ? 1 : 0;
        return m;
    }

    int occupied_nodes() const { return n() - holes(); }

    int max_count() const {
        int mx = 0;
        for (const auto& lst : at_) mx = std::max<int>(mx, static_cast<int>(lst.size()));
        return mx;
    }

    bool operator==(const Configuration&) const = default;

private:
    std::vector<std::vector<AgentId>> at_;
};

// Definition of a dispersed configuration: every node holds at least
// floor(k/n) and at most ceil(k/n) agents.
inline bool is_balanced(const Configuration& cfg, int k, int n) {
    const int lo = k / n;
    const int hi = (k + n - 1) / n;
    for (NodeId v = 0; v < n; ++v) {
        const int c = cfg.count(v);
        if (c < lo || c > hi) return false;
    }
    return true;
}

}  // namespace tvd
