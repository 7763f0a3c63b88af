#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pascal/expr.hpp"

namespace pascal {

// Fixed single-clock convention: every design has a 1-bit input "clk" and a
// 1-bit synchronous active-high reset input "rst". Neither may appear inside
// expressions; reset is applied by the semantics (rst high at a clock edge
// loads every register with its reset value).
inline constexpr const char *kClockName = "clk";
inline constexpr const char *kResetName = "rst";

struct Port {
    std::string name;
    bool is_input = true;
    int width = 1;
};

struct RegDef {
    std::string name;
    int width = 1;
    uint64_t reset_value = 0;
};

struct NetDef {
    std::string name;
    int width = 1;
    ExprPtr expr;
};

struct SecurityAnnotations {
    std::set<std::string> secret;      // input ports carrying the secret
    std::set<std::string> observable;  // output ports an attacker can see
    std::string start;                 // 1-bit input, pulsed to begin a run
    std::string done;                  // 1-bit output, completion event
};

// Set by the compensator transform so the simulator can flag internal
// completions that would land after the advertised fixed latency.
struct CompensatorMeta {
    std::string internal_done;
    int t_max = 0;
};

// Elaborated word-level sequential circuit. Immutable after construction;
// all analyses are pure functions of a Design.
struct Design {
    std::string name;
    std::vector<Port> ports;
    std::vector<RegDef> regs;
    std::vector<NetDef> nets;
    std::map<std::string, ExprPtr> next;  // reg name -> next-state expression
    SecurityAnnotations annot;
    std::optional<CompensatorMeta> compensator;

    const Port *find_port(const std::string &n) const;
    const RegDef *find_reg(const std::string &n) const;
    const NetDef *find_net(const std::string &n) const;
    // width of a declared input port, reg, or net; throws UnknownSignal
    int signal_width(const std::string &n) const;
    bool is_declared(const std::string &n) const;
    // Data inputs: input ports other than clk/rst/start.
    std::vector<Port> data_inputs() const;
    std::vector<std::string> public_inputs() const;
    // Observable output ports other than done.
    std::vector<Port> observable_data_ports() const;
};

// Structural well-formedness; empty result iff every Design invariant holds.
std::vector<Diagnostic> validate_design(const Design &d);

// Deterministic evaluation order for nets (dependencies first, ties broken by
// declaration order). Throws CombinationalLoop.
std::vector<std::string> comb_topo_order(const Design &d);

// Transitive fan-in of target (through registers), including target itself.
std::set<std::string> cone_of_influence(const Design &d, const std::string &target);

// Throws IrError carrying formatted diagnostics when validation fails.
void require_valid(const Design &d);

} // namespace pascal
