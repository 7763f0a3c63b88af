#include "pascal/enumerate.hpp"

#include <algorithm>
#include <chrono>

namespace pascal {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fresh_name(const Design &d, const std::string &base) {
    if (!d.is_declared(base) && !d.find_port(base))
        return base;
    for (int i = 2; i < 100; i++) {
        std::string cand = base + std::to_string(i);
        if (!d.is_declared(cand) && !d.find_port(cand))
            return cand;
    }
    throw PortCollision("cannot find a free name based on '" + base + "'");
}

int counter_width(int t_bound) {
    int w = 1;
    while ((uint64_t(1) << w) < (uint64_t)t_bound + 1)
        w++;
    return w;
}

std::unique_ptr<SatSolver> make_solver(const EnumerateOptions &opts) {
    if (!opts.solver_cmd.empty())
        return make_external_solver(opts.solver_cmd);
    return make_cdcl_solver();
}

// Replays a decoded witness on the interpreter and checks that the solver's
// claimed latency is real. Any mismatch is an encoder/solver bug, never a
// report entry.
TraceWitness replay_checked(const Design &d, const TraceWitness &decoded, int t_bound) {
    Stimulus s = decoded.stimulus;
    s.t_bound = t_bound;
    TraceWitness replayed = run(d, s);
    if (!replayed.completed || replayed.latency != decoded.latency)
        throw std::logic_error(
            "witness replay mismatch: solver claimed latency " +
            std::to_string(decoded.latency) + ", simulator saw " +
            (replayed.completed ? std::to_string(replayed.latency) : std::string("none")));
    // keep the solver-decoded waveform; replay confirmed it
    return decoded;
}

} // namespace

const char *engine_name(EngineMode m) {
    return m == EngineMode::Oracle ? "oracle" : "bmc";
}

const char *engine_mode_name(EngineMode m) {
    switch (m) {
    case EngineMode::BmcProperty: return "property";
    case EngineMode::BmcInstrumented: return "instrumented";
    case EngineMode::Oracle: return "exhaustive";
    }
    return "?";
}

const char *enum_verdict_name(EnumVerdict v) {
    switch (v) {
    case EnumVerdict::Classes: return "CLASSES_FOUND";
    case EnumVerdict::NoPath: return "NO_PATH";
    case EnumVerdict::NeverCompletes: return "NEVER_COMPLETES";
    case EnumVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

const char *ni_verdict_name(NoninterferenceResult::Verdict v) {
    switch (v) {
    case NoninterferenceResult::Verdict::Secure: return "SECURE";
    case NoninterferenceResult::Verdict::Insecure: return "INSECURE";
    case NoninterferenceResult::Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

int TimingClassReport::t_max() const {
    int m = 0;
    for (const auto &c : classes)
        m = std::max(m, c.latency);
    return m;
}

std::set<int> TimingClassReport::latency_set() const {
    std::set<int> s;
    for (const auto &c : classes)
        s.insert(c.latency);
    return s;
}

ModifiedDuv build_modified_duv(const Design &d, const BlockedSet &blocked, int t_bound) {
    require_valid(d);
    if (!blocked.latencies.empty() && blocked.max() > t_bound)
        throw BoundTooSmall("blocked latency " + std::to_string(blocked.max()) +
                            " exceeds t_bound " + std::to_string(t_bound));
    ModifiedDuv out;
    out.design = d;
    Design &m = out.design;
    const int w = counter_width(t_bound);

    out.counter_name = fresh_name(m, "pascal_cnt");
    std::string seen_name = fresh_name(m, "pascal_seen");
    out.hit_name = fresh_name(m, "pascal_hit");

    ExprPtr start_v = e_var(m.annot.start, 1);
    ExprPtr done_v = e_var(m.annot.done, 1);
    ExprPtr cnt_v = e_var(out.counter_name, w);
    ExprPtr seen_v = e_var(seen_name, 1);

    // counter: value k at k cycles after the most recent start pulse
    m.regs.push_back({out.counter_name, w, 0});
    m.next[out.counter_name] =
        e_mux(start_v, e_const(w, 1), e_bin(Op::Add, cnt_v, e_const(w, 1)));

    // completion latch: has done been seen since start
    m.regs.push_back({seen_name, 1, 0});
    m.next[seen_name] = e_mux(start_v, e_const(1, 0), e_bin(Op::Or, seen_v, done_v));

    // union clause: completes now (first done) and counter avoids every
    // already-found latency
    ExprPtr hit = e_bin(Op::And, done_v, e_not(seen_v));
    for (int b : blocked.latencies)
        hit = e_bin(Op::And, hit, e_cmp(Op::Neq, cnt_v, e_const(w, (uint64_t)b)));
    m.nets.push_back({out.hit_name, 1, hit});
    m.ports.push_back({out.hit_name, false, 1});

    require_valid(m);
    return out;
}

namespace {

// shared machinery for property-mode queries with an incremental solver
struct PropertySession {
    std::unique_ptr<UnrolledFormula> formula;
    std::unique_ptr<SatSolver> solver;
    const Design *design;
    int t_bound;

    PropertySession(const Design &d, int t, const EnumerateOptions &opts)
        : design(&d), t_bound(t) {
        formula = unroll_and_blast(d, t, opts.clause_budget);
        const UnrolledCopy &c = formula->copies()[0];
        // target: some completion within the bound
        std::vector<Lit> target(c.first_done.begin() + 1, c.first_done.end());
        formula->cnf().add_clause(target);
        solver = make_solver(opts);
        solver->load(formula->cnf());
    }

    void block(int latency) {
        solver->add_clause({lit_not(formula->copies()[0].first_done[latency])});
    }

    FindWitnessResult query(const EnumerateOptions &opts) {
        FindWitnessResult r;
        SatResult sat = solver->solve(opts.limits);
        r.solve_ms = sat.wall_ms;
        r.conflicts = sat.conflicts;
        if (sat.status == SatStatus::Unknown) {
            r.status = FindWitnessResult::Status::Inconclusive;
            return r;
        }
        if (sat.status == SatStatus::Unsat) {
            r.status = FindWitnessResult::Status::None;
            return r;
        }
        TraceWitness decoded = formula->decode_witness(sat, 0);
        r.witness = replay_checked(*design, decoded, t_bound);
        r.status = FindWitnessResult::Status::Found;
        return r;
    }
};

FindWitnessResult find_witness_instrumented(const Design &d, const BlockedSet &blocked,
                                            int t_bound, const EnumerateOptions &opts) {
    ModifiedDuv mod = build_modified_duv(d, blocked, t_bound);
    auto formula = std::make_unique<UnrolledFormula>(t_bound, opts.clause_budget);
    const UnrolledCopy &c = formula->add_copy(mod.design);
    std::vector<Lit> target;
    for (int k = 1; k <= t_bound; k++)
        target.push_back(c.cycles[k].at(mod.hit_name)[0]);
    formula->cnf().add_clause(target);

    auto solver = make_solver(opts);
    solver->load(formula->cnf());
    FindWitnessResult r;
    SatResult sat = solver->solve(opts.limits);
    r.solve_ms = sat.wall_ms;
    r.conflicts = sat.conflicts;
    if (sat.status == SatStatus::Unknown) {
        r.status = FindWitnessResult::Status::Inconclusive;
        return r;
    }
    if (sat.status == SatStatus::Unsat) {
        r.status = FindWitnessResult::Status::None;
        return r;
    }
    // decode against the modified copy, replay against the original design
    TraceWitness decoded = formula->decode_witness(sat, 0);
    r.witness = replay_checked(d, decoded, t_bound);
    if (blocked.contains(r.witness.latency))
        throw std::logic_error("instrumented witness hit a blocked latency");
    r.status = FindWitnessResult::Status::Found;
    return r;
}

TimingClassReport enumerate_oracle(const Design &d, int t_bound,
                                   const EnumerateOptions &opts) {
    TimingClassReport rep;
    rep.t_bound = t_bound;
    rep.engine = engine_name(opts.mode);
    rep.mode = engine_mode_name(opts.mode);
    auto t0 = std::chrono::steady_clock::now();

    int total_bits = 0;
    for (const auto &p : d.data_inputs())
        total_bits += p.width;
    ExhaustiveOptions ex;
    ex.force = opts.force_oracle_domain;
    ClassHistogram h;
    if (total_bits <= 24) {
        h = exhaustive_classes_all_inputs(d, t_bound, ex);
    } else {
        // joint domain infeasible: fix publics at zero and sweep the secrets
        h = exhaustive_classes_all_secrets(d, {}, t_bound, ex);
    }
    double total_ms = ms_since(t0);
    for (const auto &[latency, inputs] : h.sample_by_latency) {
        ClassEntry e;
        e.latency = latency;
        Stimulus s;
        s.t_bound = t_bound;
        for (const auto &[name, value] : inputs) {
            if (d.annot.secret.count(name))
                s.secret_inputs[name] = value;
            else
                s.public_inputs[name] = value;
        }
        e.witness = run(d, s);
        // amortized: the sweep discovers every class in one pass
        e.discovery_ms = total_ms / (double)h.sample_by_latency.size();
        rep.classes.push_back(std::move(e));
    }
    rep.exhausted = true;
    rep.iterations = (int)rep.classes.size();
    rep.verdict = rep.classes.empty() ? EnumVerdict::NeverCompletes : EnumVerdict::Classes;
    return rep;
}

} // namespace

FindWitnessResult find_witness(const Design &d, const BlockedSet &blocked, int t_bound,
                               const EnumerateOptions &opts) {
    require_valid(d);
    if (!blocked.latencies.empty() && blocked.max() > t_bound)
        throw BoundTooSmall("blocked latency exceeds t_bound");
    if (opts.mode == EngineMode::BmcInstrumented)
        return find_witness_instrumented(d, blocked, t_bound, opts);
    PropertySession session(d, t_bound, opts);
    for (int b : blocked.latencies)
        session.block(b);
    return session.query(opts);
}

TimingClassReport enumerate_classes(const Design &d, int t_bound,
                                    const EnumerateOptions &opts) {
    require_valid(d);
    TimingClassReport rep;
    rep.t_bound = t_bound;
    rep.engine = engine_name(opts.mode);
    rep.mode = engine_mode_name(opts.mode);

    // cheap structural pre-check before any solving
    SecurityPathResult taint = has_security_path(d);
    if (taint.verdict == PathVerdict::NoPath) {
        rep.verdict = EnumVerdict::NoPath;
        rep.exhausted = true;
        return rep;
    }

    if (opts.mode == EngineMode::Oracle)
        return enumerate_oracle(d, t_bound, opts);

    BlockedSet blocked;
    if (opts.mode == EngineMode::BmcProperty) {
        PropertySession session(d, t_bound, opts);
        for (;;) {
            auto t0 = std::chrono::steady_clock::now();
            FindWitnessResult r = session.query(opts);
            rep.iterations++;
            if (r.status == FindWitnessResult::Status::Inconclusive) {
                rep.verdict = EnumVerdict::Inconclusive;
                rep.exhausted = false;
                return rep;
            }
            if (r.status == FindWitnessResult::Status::None) {
                rep.exhaustion_check_ms = ms_since(t0);
                rep.exhausted = true;
                break;
            }
            ClassEntry e;
            e.latency = r.witness.latency;
            e.witness = r.witness;
            e.discovery_ms = ms_since(t0);
            rep.classes.push_back(std::move(e));
            blocked.add(r.witness.latency);
            session.block(r.witness.latency);
        }
    } else {
        for (;;) {
            auto t0 = std::chrono::steady_clock::now();
            FindWitnessResult r = find_witness_instrumented(d, blocked, t_bound, opts);
            rep.iterations++;
            if (r.status == FindWitnessResult::Status::Inconclusive) {
                rep.verdict = EnumVerdict::Inconclusive;
                rep.exhausted = false;
                return rep;
            }
            if (r.status == FindWitnessResult::Status::None) {
                rep.exhaustion_check_ms = ms_since(t0);
                rep.exhausted = true;
                break;
            }
            ClassEntry e;
            e.latency = r.witness.latency;
            e.witness = r.witness;
            e.discovery_ms = ms_since(t0);
            rep.classes.push_back(std::move(e));
            blocked.add(r.witness.latency);
        }
    }
    rep.verdict = rep.classes.empty() ? EnumVerdict::NeverCompletes : EnumVerdict::Classes;
    return rep;
}

NoninterferenceResult check_noninterference(const Design &d, int t_bound,
                                            const EnumerateOptions &opts) {
    require_valid(d);
    auto t0 = std::chrono::steady_clock::now();
    NoninterferenceResult res;

    UnrolledFormula formula(t_bound, opts.clause_budget);
    const UnrolledCopy &a = formula.add_copy(d);
    // second copy shares the public input words; secrets stay free
    std::map<std::string, Word> shared;
    for (const auto &name : d.public_inputs())
        shared[name] = a.data_inputs.at(name);
    const UnrolledCopy &b = formula.add_copy(d, &shared);

    GateBuilder &g = formula.gates();
    std::vector<Lit> diff_bits;
    for (int k = 1; k <= t_bound; k++)
        diff_bits.push_back(g.b_xor(a.first_done[k], b.first_done[k]));
    Lit different = g.b_or_many(diff_bits);
    Lit target = g.b_and(g.b_and(a.completed, b.completed), different);
    formula.cnf().add_clause({target});

    auto solver = make_solver(opts);
    solver->load(formula.cnf());
    SatResult sat = solver->solve(opts.limits);
    res.wall_ms = ms_since(t0);
    if (sat.status == SatStatus::Unknown) {
        res.verdict = NoninterferenceResult::Verdict::Inconclusive;
        return res;
    }
    if (sat.status == SatStatus::Unsat) {
        res.verdict = NoninterferenceResult::Verdict::Secure;
        return res;
    }
    TraceWitness wa = replay_checked(d, formula.decode_witness(sat, 0), t_bound);
    TraceWitness wb = replay_checked(d, formula.decode_witness(sat, 1), t_bound);
    if (wa.latency == wb.latency)
        throw std::logic_error("noninterference witness pair has equal latencies");
    if (wa.stimulus.public_inputs != wb.stimulus.public_inputs)
        throw std::logic_error("noninterference witness pair differs on public inputs");
    res.verdict = NoninterferenceResult::Verdict::Insecure;
    res.witness_pair = {std::move(wa), std::move(wb)};
    return res;
}

} // namespace pascal
