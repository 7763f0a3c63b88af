#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pascal/ir.hpp"

namespace pascal {

// Conservative forward information-flow labels over a two-point lattice.
// Control dependence is included: a mux whose select is tainted taints its
// output regardless of the data operands.
struct TaintState {
    std::map<std::string, bool> tainted;                 // per declared signal
    std::vector<std::vector<std::string>> frontier_log;  // newly tainted per pass
    int iterations = 0;

    bool is_tainted(const std::string &name) const {
        auto it = tainted.find(name);
        return it != tainted.end() && it->second;
    }
    std::set<std::string> tainted_set() const;
};

TaintState propagate(const Design &d);

enum class PathVerdict { NoPath, PathExists };

struct SecurityPathResult {
    PathVerdict verdict = PathVerdict::NoPath;
    // observable -> tainted part of its cone of influence
    std::map<std::string, std::set<std::string>> witness_cones;
    TaintState state;
};

SecurityPathResult has_security_path(const Design &d);

} // namespace pascal
