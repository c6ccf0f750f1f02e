#pragma once

#include <string>

#include "tvd/core.hpp"

namespace tvd {

enum class Visibility { zero_hop, one_hop, full };
enum class Communication { f2f, l_hop, global };

struct ModelSpec {
    Visibility visibility = Visibility::zero_hop;
    Communication communication = Communication::f2f;
    int l = 0;  // hop radius when communication == l_hop

    bool operator==(const ModelSpec&) const = default;
};

// True when `have` offers at least the information of `need`: an algorithm
// validated for `need` can run under `have`.
inline bool model_covers(const ModelSpec& have, const ModelSpec& need) {
    auto vis_rank = [](Visibility v) {
        return v == Visibility::zero_hop ? 0 : v == Visibility::one_hop ? 1 : 2;
    };
    if (vis_rank(have.visibility) < vis_rank(need.visibility)) return false;
    auto comm_reach = [](const ModelSpec& m) {
        if (m.communication == Communication::f2f) return 0;
        if (m.communication == Communication::global) return INT32_MAX;
        return m.l;
    };
    return comm_reach(have) >= comm_reach(need);
}

inline std::string to_string(Visibility v) {
    switch (v) {
        case Visibility::zero_hop: return "zero_hop";
        case Visibility::one_hop: return "one_hop";
        case Visibility::full: return "full";
    }
    return "?";
}

inline std::string to_string(Communication c) {
    switch (c) {
        case Communication::f2f: return "f2f";
        case Communication::l_hop: return "l_hop";
        case Communication::global: return "global";
    }
    return "?";
}

inline Visibility visibility_from(const std::string& s) {
    if (s == "zero_hop") return Visibility::zero_hop;
    if (s == "one_hop") return Visibility::one_hop;
    if (s == "full") return Visibility::full;
    throw ValidationError("unknown visibility: " + s);
}

inline Communication communication_from(const std::string& s) {
    if (s == "f2f") return Communication::f2f;
    if (s == "l_hop") return Communication::l_hop;
    if (s == "global") return Communication::global;
    throw ValidationError("unknown communication: " + s);
}

}  // namespace tvd
