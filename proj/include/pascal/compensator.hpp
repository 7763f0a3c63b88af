#pragma once

#include "pascal/enumerate.hpp"
#include "pascal/ir.hpp"

namespace pascal {

// Parameters of the balancing FSM: a counter to t_max plus output gating.
struct CompensatorSpec {
    int t_max = 0;
    int counter_width = 0;  // ceil(log2(t_max + 1))
    std::string reset_condition = "start";  // counter restarts on the start pulse
    // (observable data port, holding register) pairs; filled by harden
    std::vector<std::pair<std::string, std::string>> gated_ports;
};

struct OverheadReport {
    int counter_flops = 0;       // the paper's figure: just the counter
    int holding_flops = 0;       // sum of gated data port widths
    int total_added_flops = 0;   // counter + holding registers + capture latch
    long path_balanced_unit = 0;     // sum over classes of (t_max - t_i)
    long path_balanced_scaled = 0;   // unit estimate at full datapath width
    double savings_ratio = 1.0;      // path_balanced_unit / total_added_flops
    std::string note;
};

int compensator_counter_width(int t_max);

// t_m = findMaxExecutionLength(P). Refuses partial reports.
CompensatorSpec synthesize_spec(const TimingClassReport &r);

struct HardenResult {
    Design sduv;
    CompensatorSpec spec;  // gated_ports filled in
};

// Splices the compensator onto d: the original done and observable data
// ports become internal signals, holding registers capture data at the
// internal completion, and the exposed done fires exactly at counter ==
// t_max. Original net and next-state expressions are carried over unchanged.
HardenResult harden(const Design &d, const CompensatorSpec &spec);

OverheadReport overhead(const TimingClassReport &r, const Design &d);

// multiset-subset check used by tests and the CLI: every original net /
// next-state definition appears unchanged in the hardened design
bool structurally_contains(const Design &original, const Design &hardened,
                           const std::vector<std::pair<std::string, std::string>> &renames);

} // namespace pascal
