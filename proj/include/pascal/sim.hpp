#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pascal/ir.hpp"

namespace pascal {

// One concrete run: constant data-input valuation plus the fixed protocol
// (rst high for one cycle before cycle 0, start high exactly at cycle 0).
struct Stimulus {
    std::map<std::string, uint64_t> public_inputs;
    std::map<std::string, uint64_t> secret_inputs;
    int t_bound = 1;

    std::map<std::string, uint64_t> all_inputs() const;
};

struct TraceWitness {
    Stimulus stimulus;
    // per-cycle values of the recorded signals (done + observables), cycles
    // 0..last recorded cycle
    std::vector<std::string> trace_signals;
    std::vector<std::vector<uint64_t>> trace;  // trace[cycle][signal index]
    int latency = 0;                           // valid iff completed
    bool completed = false;
    std::map<std::string, uint64_t> data_at_done;
    std::vector<std::string> failed_assertions;

    std::vector<uint64_t> waveform(const std::string &signal) const;
};

// Design compiled for interpretation: interned signal slots and stack
// bytecode per net / next-state function.
class CompiledDesign {
public:
    explicit CompiledDesign(const Design &d);

    const Design &design() const { return *design_; }
    int slot(const std::string &name) const;         // throws UnknownSignal
    int try_slot(const std::string &name) const;     // -1 when absent
    int num_slots() const { return (int)slot_names_.size(); }
    const std::string &slot_name(int s) const { return slot_names_[s]; }

private:
    friend class Simulator;
    enum class SimOp : uint8_t {
        PushConst, PushVar, Not, And, Or, Xor, Add, Sub, Mul,
        Eq, Neq, Lt, Shl, Shr, Mux, Slice, Concat, Zext,
    };
    struct Insn {
        SimOp op;
        int a = 0;         // slot / hi / operand width
        int b = 0;         // lo
        uint64_t imm = 0;  // constant / result mask
    };
    struct Program {
        std::vector<Insn> code;
    };
    const Design *design_;
    std::vector<std::string> slot_names_;
    std::map<std::string, int> slot_of_;
    std::vector<int> input_slots_;
    std::vector<int> reg_slots_;
    std::vector<uint64_t> reg_resets_;
    std::vector<int> net_slots_;            // in topo order
    std::vector<Program> net_programs_;     // same order
    std::vector<Program> next_programs_;    // indexed like reg_slots_
    Program compile(const ExprPtr &e) const;
    int rst_slot_ = -1;
};

// Cycle-accurate interpreter. Protocol composition is up to the caller:
//   sim.apply_reset(); then per cycle: set_input(...); eval(); read; latch();
class Simulator {
public:
    explicit Simulator(const CompiledDesign &cd);

    void apply_reset();                        // load registers with reset values
    void set_input(const std::string &name, uint64_t value);
    void set_input(int slot, uint64_t value);
    void eval();                               // compute all nets from regs+inputs
    void latch();                              // clock edge (honors rst input)
    uint64_t value(int slot) const { return vals_[slot]; }
    uint64_t value(const std::string &name) const;

private:
    const CompiledDesign *cd_;
    std::vector<uint64_t> vals_;
    std::vector<uint64_t> stack_;
    std::vector<uint64_t> next_vals_;
    uint64_t run_program(const CompiledDesign::Program &p);
};

struct RunOptions {
    bool record_trace = true;
    // extra signals to record besides done + observables
    std::vector<std::string> extra_signals;
};

// Runs the standard protocol and measures completion latency: the index of
// the first cycle in 1..t_bound at which done reads 1 (cycle 0 is the start
// pulse). Throws StimulusWidthMismatch on bad valuations.
TraceWitness run(const Design &d, const Stimulus &s, const RunOptions &opts = {});
TraceWitness run(const CompiledDesign &cd, const Stimulus &s, const RunOptions &opts = {});

// Exhaustive latency-class oracle.
struct ClassHistogram {
    std::map<int, uint64_t> count_by_latency;
    std::map<int, std::map<std::string, uint64_t>> sample_by_latency;  // first inputs seen
    std::vector<std::map<std::string, uint64_t>> noncompleted;         // capped at 64 entries
    uint64_t noncompleted_total = 0;
    uint64_t runs = 0;

    std::set<int> latencies() const;
};

struct ExhaustiveOptions {
    bool force = false;       // override the 24-bit domain guard
    int num_threads = 0;      // 0 = hardware concurrency
    bool throw_on_noncompletion = false;
};

// Runs every assignment produced by the domain iterator (each a full data
// input valuation) and returns the latency histogram. The iterator returns
// false when exhausted. Deterministic: the histogram does not depend on
// thread count.
ClassHistogram exhaustive_classes_domain(
    const Design &d, const std::function<bool(std::map<std::string, uint64_t> &)> &domain,
    uint64_t domain_size, int t_bound, const ExhaustiveOptions &opts = {});

// Spec-shaped convenience: fixed public valuation, iterate the secret domain.
ClassHistogram exhaustive_classes(const Design &d,
                                  const std::map<std::string, uint64_t> &fixed_public,
                                  const std::vector<std::map<std::string, uint64_t>> &secrets,
                                  int t_bound, const ExhaustiveOptions &opts = {});

// All valuations of all secret inputs (publics fixed); guarded by total
// secret width <= 24 bits unless opts.force.
ClassHistogram exhaustive_classes_all_secrets(const Design &d,
                                              const std::map<std::string, uint64_t> &fixed_public,
                                              int t_bound, const ExhaustiveOptions &opts = {});

// All valuations of every data input (secret and public) jointly.
ClassHistogram exhaustive_classes_all_inputs(const Design &d, int t_bound,
                                             const ExhaustiveOptions &opts = {});

// Co-simulation equivalence on observable data at the respective done cycles.
struct CosimResult {
    bool pass = true;
    uint64_t samples = 0;
    uint64_t skipped_noncompleting = 0;  // reference did not complete in bound
    std::optional<Stimulus> failing_stimulus;
    std::string detail;
};

CosimResult cosim_equiv(const Design &a, const Design &b, uint64_t samples, int t_bound,
                        uint64_t seed = 0x5eedu);

// Textual trace dump (cycle, signal, value) for every port and register.
std::string dump_trace(const Design &d, const Stimulus &s, int cycles);

} // namespace pascal
