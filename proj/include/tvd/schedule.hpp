#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>

#include "tvd/config.hpp"
#include "tvd/journey.hpp"

namespace tvd {

// Read-only facts an adaptive adversary may inspect before choosing the
// round's snapshot.
struct SystemView {
    int round = 0;  // engine round about to be played, 1-based
    const Configuration* placement = nullptr;
    int k = 0;
    int n = 0;
};

// Forward simulation of one CCM round against a hypothetical snapshot,
// without committing it. Agrees exactly with what the engine would do.
struct OracleStep {
    Configuration after;
    std::vector<int> intent_port;     // per agent index; -1 = stay
    std::vector<std::uint8_t> moved;  // per agent index; 1 iff relocated
    const std::vector<AgentId>* ids = nullptr;
};
using StepOracle = std::function<OracleStep(const Snapshot&)>;

enum class ScheduleClass { temporal, one_bounded, ell_bounded, unchecked };

// Per-round snapshot supplier: a fixed sequence or an adaptive adversary.
class ScheduleSource {
public:
    virtual ~ScheduleSource() = default;
    virtual std::string name() const = 0;
    virtual ScheduleClass declared_class() const = 0;
    virtual int ell() const { return 0; }
    // reason, when set, lands in the trace as a per-round annotation
    virtual Snapshot next(const Footprint& f, const SystemView& view, const StepOracle& oracle,
                          std::string* reason) = 0;
};

// Snapshot violates the source's declared class? Engine aborts the run.
inline void check_declared_class(const Footprint& f, const Snapshot& s, ScheduleClass cls,
                                 int ell, const std::string& who) {
    if (cls == ScheduleClass::one_bounded || cls == ScheduleClass::ell_bounded) {
        const int bound = cls == ScheduleClass::one_bounded ? 1 : ell;
        if (missing_edge_count(f, s) > bound)
            throw ClassViolation(who + ": snapshot misses more than " + std::to_string(bound) +
                                 " edges at round " + std::to_string(s.round));
        if (!is_snapshot_connected(f, s))
            throw ClassViolation(who + ": disconnected snapshot at round " +
                                 std::to_string(s.round));
    }
    // temporal class has no per-snapshot obligation; it is verified over
    // realized prefixes by check_temporal_connectivity
}

class AlwaysFull final : public ScheduleSource {
public:
    std::string name() const override { return "always_full"; }
    ScheduleClass declared_class() const override { return ScheduleClass::ell_bounded; }
    int ell() const override { return 0; }
    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle&,
                  std::string*) override {
        return Snapshot::full(f, view.round);
    }
};

// Explicit per-round present-edge sets; rounds past the list repeat the full
// footprint.
class FixedSchedule final : public ScheduleSource {
public:
    explicit FixedSchedule(std::vector<std::vector<EdgeId>> absent_per_round)
        : absent_(std::move(absent_per_round)) {}

    std::string name() const override { return "fixed"; }
    ScheduleClass declared_class() const override { return ScheduleClass::unchecked; }
    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle&,
                  std::string*) override {
        Snapshot s = Snapshot::full(f, view.round);
        const std::size_t idx = static_cast<std::size_t>(view.round - 1);
        if (idx < absent_.size())
            for (EdgeId id : absent_[idx]) s.remove(id);
        return s;
    }

private:
    std::vector<std::vector<EdgeId>> absent_;
};

// Seeded random schedule: each round removes an admissible set of up to
// `ell` edges, keeping every snapshot connected. With ell = 1 the removed
// edge is drawn uniformly from {none} + all non-bridge edges.
class RandomSchedule final : public ScheduleSource {
public:
    RandomSchedule(int ell, std::uint64_t seed) : ell_(ell), rng_(seed) {
        if (ell < 0) throw ValidationError("ell must be non-negative");
    }

    std::string name() const override {
        return ell_ == 1 ? "random_one_bounded" : "random_ell_bounded";
    }
    ScheduleClass declared_class() const override {
        return ell_ == 1 ? ScheduleClass::one_bounded : ScheduleClass::ell_bounded;
    }
    int ell() const override { return ell_; }

    Snapshot next(const Footprint& f, const SystemView& view, const StepOracle&,
                  std::string* reason) override {
        Snapshot s = Snapshot::full(f, view.round);
        if (ell_ == 0) return s;
        if (ell_ == 1) {
            std::vector<EdgeId> candidates{-1};  // -1 = remove nothing
            for (EdgeId id = 0; id < f.m(); ++id) {
                s.remove(id);
                if (is_snapshot_connected(f, s)) candidates.push_back(id);
                s.add(id);
            }
            EdgeId pick = candidates[draw_below(rng_, static_cast<int>(candidates.size()))];
            if (pick >= 0) {
                s.remove(pick);
                if (reason) *reason = "removed edge " + std::to_string(pick);
            }
            return s;
        }
        // ell > 1: draw a target size, then greedily remove a random shuffle
        // while connectivity survives
        const int target = draw_below(rng_, ell_ + 1);
        std::vector<EdgeId> order(f.m());
        std::iota(order.begin(), order.end(), 0);
        for (int i = f.m() - 1; i > 0; --i) std::swap(order[i], order[draw_below(rng_, i + 1)]);
        int removed = 0;
        for (EdgeId id : order) {
            if (removed >= target) break;
            s.remove(id);
            if (is_snapshot_connected(f, s))
                ++removed;
            else
                s.add(id);
        }
        if (reason) *reason = "removed " + std::to_string(removed) + " edges";
        return s;
    }

private:
    int ell_;
    std::mt19937_64 rng_;
};

}  // namespace tvd
