#pragma once

#include "tvd/engine.hpp"

namespace tvd {

// Materialized per-round record. Configurations are stored per node with
// ascending agent lists, so permuted-but-equal placements serialize the same.
struct RoundRecord {
    int round = 0;
    std::vector<EdgeId> present;
    std::vector<std::vector<AgentId>> before;
    std::vector<std::vector<AgentId>> after;
    std::vector<int> intent_port;  // aligned with ids; -1 stay
    std::vector<std::uint8_t> success;
    std::vector<int> memory_bits;
    std::vector<AgentId> terminated;
    std::string reason;
};

struct Trace {
    std::vector<AgentId> ids;
    std::vector<RoundRecord> rounds;
    bool timeout = false;
};

inline RoundRecord make_record(const RoundView& rv) {
    RoundRecord rec;
    rec.round = rv.round;
    rec.present = rv.snapshot->present_ids();
    const int n = rv.before->n();
    rec.before.reserve(n);
    rec.after.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
        rec.before.push_back(rv.before->at(v));
        rec.after.push_back(rv.after->at(v));
    }
    rec.intent_port = *rv.intent_port;
    rec.success.assign(rv.success->begin(), rv.success->end());
    rec.memory_bits = *rv.memory_bits;
    for (std::size_t i = 0; i < rv.ids->size(); ++i)
        if ((*rv.terminated)[i]) rec.terminated.push_back((*rv.ids)[i]);
    rec.reason = *rv.reason;
    return rec;
}

// One canonical encoding feeds both the streaming digest and trace_hash, so
// a summary digest always matches the trace it summarizes. The adversary's
// free-text reason is deliberately excluded.
inline void absorb_record(Fnv1a& h, const RoundRecord& rec) {
    h.i64(rec.round);
    h.vec(rec.present);
    auto conf = [&](const std::vector<std::vector<AgentId>>& c) {
        h.i64(static_cast<int>(c.size()));
        for (const auto& lst : c) h.vec(lst);
    };
    conf(rec.before);
    conf(rec.after);
    h.vec(rec.intent_port);
    h.u64(rec.success.size());
    for (auto s : rec.success) h.u64(s);
    h.vec(rec.terminated);
    h.vec(rec.memory_bits);
}

class TraceHasher {
public:
    void absorb(const RoundView& rv) { absorb_record(h_, make_record(rv)); }
    std::uint64_t digest() const { return h_.digest(); }

private:
    Fnv1a h_;
};

// Stable content hash of the canonical trace serialization.
inline std::uint64_t trace_hash(const Trace& t) {
    Fnv1a h;
    for (const auto& rec : t.rounds) absorb_record(h, rec);
    return h.digest();
}

}  // namespace tvd
