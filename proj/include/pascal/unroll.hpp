#pragma once

#include <deque>
#include <memory>

#include "pascal/blast.hpp"
#include "pascal/ir.hpp"
#include "pascal/sim.hpp"
#include "pascal/solver.hpp"

namespace pascal {

// One time-frame-expanded instance of a design inside a formula. Data inputs
// are symbolic constants held for the whole run; start/rst follow the fixed
// protocol (registers enter cycle 0 with their reset values, start is high
// exactly at cycle 0).
struct UnrolledCopy {
    const Design *design = nullptr;
    std::map<std::string, Word> data_inputs;
    std::vector<std::map<std::string, Word>> cycles;  // signal -> word, cycles 0..T
    std::vector<Lit> done;        // done value per cycle, 0..T
    std::vector<Lit> first_done;  // first_done[k]: done first reads 1 at cycle k (k >= 1)
    Lit completed = kFalse;
};

// Propositional time-frame expansion: variable words per (signal, cycle),
// clauses in CNF, protocol baked in as constants. Satisfying assignments
// decode to TraceWitnesses.
class UnrolledFormula {
public:
    UnrolledFormula(int t_bound, size_t clause_budget);
    UnrolledFormula(const UnrolledFormula &) = delete;
    UnrolledFormula &operator=(const UnrolledFormula &) = delete;

    // Adds one copy of d. When shared_inputs is given, input ports found
    // there reuse those words (used to pin public inputs equal across the
    // two copies of a self-composition).
    const UnrolledCopy &add_copy(const Design &d,
                                 const std::map<std::string, Word> *shared_inputs = nullptr);

    Cnf &cnf() { return cnf_; }
    const Cnf &cnf() const { return cnf_; }
    GateBuilder &gates() { return gb_; }
    int t_bound() const { return t_bound_; }
    const std::deque<UnrolledCopy> &copies() const { return copies_; }

    // Decodes the data-input valuation of one copy under a model.
    Stimulus decode_stimulus(const SatResult &model, size_t copy_idx) const;
    // Decoded latency: the k with first_done[k] true, or 0 if none.
    int decode_latency(const SatResult &model, size_t copy_idx) const;
    // Full witness as seen by the solver: stimulus, latency, done waveform
    // and observable values per cycle up to the latency.
    TraceWitness decode_witness(const SatResult &model, size_t copy_idx) const;

private:
    Cnf cnf_;
    GateBuilder gb_;
    int t_bound_;
    std::deque<UnrolledCopy> copies_;
};

std::unique_ptr<UnrolledFormula> unroll_and_blast(const Design &d, int t_bound,
                                                  size_t clause_budget = 50'000'000);

} // namespace pascal
