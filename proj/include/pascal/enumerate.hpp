#pragma once

#include <optional>
#include <set>

#include "pascal/sim.hpp"
#include "pascal/solver.hpp"
#include "pascal/taint.hpp"
#include "pascal/unroll.hpp"

namespace pascal {

// Latencies already found; each loop iteration grows this strictly.
struct BlockedSet {
    std::set<int> latencies;

    bool contains(int t) const { return latencies.count(t) > 0; }
    void add(int t) { latencies.insert(t); }
    int max() const { return latencies.empty() ? 0 : *latencies.rbegin(); }
};

enum class EngineMode { BmcProperty, BmcInstrumented, Oracle };

const char *engine_name(EngineMode m);   // "bmc" | "oracle"
const char *engine_mode_name(EngineMode m);  // "property" | "instrumented" | "exhaustive"

struct EnumerateOptions {
    EngineMode mode = EngineMode::BmcProperty;
    std::string solver_cmd;  // external DIMACS solver when nonempty
    SolverLimits limits;
    size_t clause_budget = 50'000'000;
    bool force_oracle_domain = false;  // lift the 24-bit guard in oracle mode
};

struct ClassEntry {
    int latency = 0;
    TraceWitness witness;
    double discovery_ms = 0.0;
};

enum class EnumVerdict { Classes, NoPath, NeverCompletes, Inconclusive };

const char *enum_verdict_name(EnumVerdict v);

struct TimingClassReport {
    std::vector<ClassEntry> classes;  // in discovery order, latencies pairwise distinct
    int t_bound = 0;
    std::string engine;  // "bmc" | "oracle"
    std::string mode;    // "property" | "instrumented" | "exhaustive"
    bool exhausted = false;  // final query proved unsatisfiable up to t_bound
    EnumVerdict verdict = EnumVerdict::Classes;
    double exhaustion_check_ms = 0.0;
    int iterations = 0;

    int t_max() const;
    std::set<int> latency_set() const;
};

// Fig.-4-style instrumentation: the original design plus a cycle counter, a
// done-edge latch, and the union-clause disequality network driving a fresh
// 1-bit output that fires exactly when a run completes with a latency outside
// `blocked`.
struct ModifiedDuv {
    Design design;
    std::string hit_name;      // the pascal_hit output
    std::string counter_name;  // cycle counter register
};

ModifiedDuv build_modified_duv(const Design &d, const BlockedSet &blocked, int t_bound);

struct FindWitnessResult {
    enum class Status { Found, None, Inconclusive } status = Status::None;
    TraceWitness witness;  // valid iff Found; replayed on the simulator
    double solve_ms = 0.0;
    uint64_t conflicts = 0;
};

// One counterexample query: a completion with latency not in `blocked`
// within t_bound, or None when no such trace exists.
FindWitnessResult find_witness(const Design &d, const BlockedSet &blocked, int t_bound,
                               const EnumerateOptions &opts = {});

// The full PASCAL loop. Requires a taint security path (otherwise returns an
// empty NoPath report); repeats find-and-block until unsatisfiable.
TimingClassReport enumerate_classes(const Design &d, int t_bound,
                                    const EnumerateOptions &opts = {});

// Timing-sensitive noninterference as a 2-safety check over a
// self-composition: public inputs pinned equal, secrets free, query "both
// runs complete with different latencies".
struct NoninterferenceResult {
    enum class Verdict { Secure, Insecure, Inconclusive } verdict = Verdict::Secure;
    std::optional<std::pair<TraceWitness, TraceWitness>> witness_pair;
    double wall_ms = 0.0;
};

const char *ni_verdict_name(NoninterferenceResult::Verdict v);

NoninterferenceResult check_noninterference(const Design &d, int t_bound,
                                            const EnumerateOptions &opts = {});

} // namespace pascal
