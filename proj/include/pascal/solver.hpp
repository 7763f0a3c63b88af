#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pascal/cnf.hpp"

namespace pascal {

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
    SatStatus status = SatStatus::Unknown;
    std::vector<uint8_t> model;  // indexed by var; meaningful iff Sat
    uint64_t conflicts = 0;
    double wall_ms = 0.0;

    bool lit_true(Lit l) const { return model[lit_var(l)] != lit_sign(l); }
};

struct SolverLimits {
    int64_t max_conflicts = -1;  // < 0: unlimited
    double timeout_ms = -1;      // < 0: unlimited
};

// Incremental interface: load a base formula once, then alternate
// add_clause / solve. Learned clauses survive across solve calls.
class SatSolver {
public:
    virtual ~SatSolver() = default;
    virtual void load(const Cnf &cnf) = 0;
    virtual void add_clause(const std::vector<Lit> &lits) = 0;
    virtual SatResult solve(const SolverLimits &limits = {}) = 0;
};

// Built-in conflict-driven clause-learning solver: two-literal watches,
// VSIDS branching with phase saving, first-UIP learning with recursive
// minimization, Luby restarts, LBD-based learnt-clause reduction.
std::unique_ptr<SatSolver> make_cdcl_solver();

// External solver handoff: writes DIMACS to a temp file, runs
// `command <file>`, parses SAT-competition style ("s ..."/"v ...") or
// minisat-style ("SAT\n<lits> 0") output.
std::unique_ptr<SatSolver> make_external_solver(std::string command);

// Parses solver output text; exposed for tests.
std::optional<SatResult> parse_solver_output(const std::string &text, int num_vars);

} // namespace pascal
