#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvd {

using NodeId = int;   // internal node index, never exposed to agents
using AgentId = int;  // unique agent identifier in [1, n^c]
using Port = int;     // local port label in [0, deg(v))
using EdgeId = int;   // index into Footprint::edges()

// Thrown when a scenario or operation precondition is violated.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an adaptive schedule emits a snapshot outside its declared class.
struct ClassViolation : std::runtime_error {
    explicit ClassViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an adversary cannot find the edge its construction guarantees.
struct ProofInvariantViolation : std::runtime_error {
    explicit ProofInvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Number of bits needed to store any integer in [0, max_value].
inline int bit_width_for(long long max_value) {
    int bits = 0;
    unsigned long long v = max_value < 0 ? 0ULL : static_cast<unsigned long long>(max_value);
    while (v > 0) {
        ++bits;
        v >>= 1;
    }
    return bits == 0 ? 1 : bits;
}

inline int ceil_log2(long long v) {
    int bits = 0;
    long long p = 1;
    while (p < v) {
        p <<= 1;
        ++bits;
    }
    return bits;
}

// FNV-1a 64-bit, used for stable trace digests.
struct Fnv1a {
    std::uint64_t h = 1469598103934665603ULL;

    void bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (i * 8)) & 0xFFu;
            h *= 1099511628211ULL;
        }
    }
    void i64(long long v) { u64(static_cast<std::uint64_t>(v)); }
    void vec(const std::vector<int>& v) {
        u64(v.size());
        for (int x : v) i64(x);
    }
    std::uint64_t digest() const { return h; }
};

// Deterministic bounded integer draw; avoids std::uniform_int_distribution,
// whose output is not pinned by the standard across implementations.
template <class Rng>
int draw_below(Rng& rng, int bound) {
    if (bound <= 1) return 0;
    return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
}

}  // namespace tvd
