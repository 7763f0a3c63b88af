#include "pascal/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace pascal {

std::map<std::string, uint64_t> Stimulus::all_inputs() const {
    std::map<std::string, uint64_t> all = public_inputs;
    for (const auto &[k, v] : secret_inputs)
        all[k] = v;
    return all;
}

std::vector<uint64_t> TraceWitness::waveform(const std::string &signal) const {
    for (size_t i = 0; i < trace_signals.size(); i++) {
        if (trace_signals[i] != signal)
            continue;
        std::vector<uint64_t> out;
        out.reserve(trace.size());
        for (const auto &row : trace)
            out.push_back(row[i]);
        return out;
    }
    return {};
}

// ---------------------------------------------------------------------------
// bytecode

CompiledDesign::CompiledDesign(const Design &d) : design_(&d) {
    require_valid(d);
    auto add_slot = [&](const std::string &n) {
        int s = (int)slot_names_.size();
        slot_names_.push_back(n);
        slot_of_[n] = s;
        return s;
    };
    for (const auto &p : d.ports)
        if (p.is_input)
            input_slots_.push_back(add_slot(p.name));
    for (const auto &r : d.regs) {
        reg_slots_.push_back(add_slot(r.name));
        reg_resets_.push_back(r.reset_value);
    }
    for (const auto &w : d.nets)
        add_slot(w.name);

    for (const auto &name : comb_topo_order(d)) {
        const NetDef *w = d.find_net(name);
        net_slots_.push_back(slot_of_.at(name));
        net_programs_.push_back(compile(w->expr));
    }
    for (const auto &r : d.regs)
        next_programs_.push_back(compile(d.next.at(r.name)));
    rst_slot_ = slot_of_.at(kResetName);
}

int CompiledDesign::slot(const std::string &name) const {
    auto it = slot_of_.find(name);
    if (it == slot_of_.end())
        throw UnknownSignal(name);
    return it->second;
}

int CompiledDesign::try_slot(const std::string &name) const {
    auto it = slot_of_.find(name);
    return it == slot_of_.end() ? -1 : it->second;
}

CompiledDesign::Program CompiledDesign::compile(const ExprPtr &e) const {
    Program p;
    std::function<void(const ExprPtr &)> emit = [&](const ExprPtr &x) {
        switch (x->op) {
        case Op::Const:
            p.code.push_back({SimOp::PushConst, 0, 0, x->value});
            return;
        case Op::Var:
            p.code.push_back({SimOp::PushVar, slot_of_.at(x->name), 0, 0});
            return;
        case Op::Slice:
            emit(x->args[0]);
            p.code.push_back({SimOp::Slice, x->hi, x->lo, width_mask(x->width)});
            return;
        case Op::Concat:
            // most significant part first; fold left: acc = (acc << w_i) | part_i
            emit(x->args[0]);
            for (size_t i = 1; i < x->args.size(); i++) {
                emit(x->args[i]);
                p.code.push_back({SimOp::Concat, x->args[i]->width, 0, width_mask(x->width)});
            }
            return;
        default:
            break;
        }
        for (const auto &a : x->args)
            emit(a);
        Insn in;
        in.imm = width_mask(x->width);
        switch (x->op) {
        case Op::Not: in.op = SimOp::Not; break;
        case Op::And: in.op = SimOp::And; break;
        case Op::Or: in.op = SimOp::Or; break;
        case Op::Xor: in.op = SimOp::Xor; break;
        case Op::Add: in.op = SimOp::Add; break;
        case Op::Sub: in.op = SimOp::Sub; break;
        case Op::Mul: in.op = SimOp::Mul; break;
        case Op::Eq: in.op = SimOp::Eq; break;
        case Op::Neq: in.op = SimOp::Neq; break;
        case Op::Lt: in.op = SimOp::Lt; break;
        case Op::Shl:
            in.op = SimOp::Shl;
            in.a = x->width;
            break;
        case Op::Shr:
            in.op = SimOp::Shr;
            in.a = x->width;
            break;
        case Op::Mux: in.op = SimOp::Mux; break;
        case Op::Zext: in.op = SimOp::Zext; break;
        default:
            throw IrError("compile: unexpected operator");
        }
        p.code.push_back(in);
    };
    emit(e);
    return p;
}

// ---------------------------------------------------------------------------
// interpreter

Simulator::Simulator(const CompiledDesign &cd)
    : cd_(&cd), vals_(cd.num_slots(), 0), next_vals_(cd.reg_slots_.size(), 0) {
    stack_.reserve(64);
}

void Simulator::apply_reset() {
    for (size_t i = 0; i < cd_->reg_slots_.size(); i++)
        vals_[cd_->reg_slots_[i]] = cd_->reg_resets_[i];
}

void Simulator::set_input(const std::string &name, uint64_t value) {
    set_input(cd_->slot(name), value);
}

void Simulator::set_input(int slot, uint64_t value) { vals_[slot] = value; }

uint64_t Simulator::value(const std::string &name) const { return vals_[cd_->slot(name)]; }

uint64_t Simulator::run_program(const CompiledDesign::Program &p) {
    using SimOp = CompiledDesign::SimOp;
    auto &st = stack_;
    st.clear();
    for (const auto &in : p.code) {
        switch (in.op) {
        case SimOp::PushConst:
            st.push_back(in.imm);
            break;
        case SimOp::PushVar:
            st.push_back(vals_[in.a]);
            break;
        case SimOp::Not:
            st.back() = ~st.back() & in.imm;
            break;
        case SimOp::And: {
            uint64_t b = st.back(); st.pop_back();
            st.back() &= b;
            break;
        }
        case SimOp::Or: {
            uint64_t b = st.back(); st.pop_back();
            st.back() |= b;
            break;
        }
        case SimOp::Xor: {
            uint64_t b = st.back(); st.pop_back();
            st.back() ^= b;
            break;
        }
        case SimOp::Add: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = (st.back() + b) & in.imm;
            break;
        }
        case SimOp::Sub: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = (st.back() - b) & in.imm;
            break;
        }
        case SimOp::Mul: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = (st.back() * b) & in.imm;
            break;
        }
        case SimOp::Eq: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = st.back() == b ? 1 : 0;
            break;
        }
        case SimOp::Neq: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = st.back() != b ? 1 : 0;
            break;
        }
        case SimOp::Lt: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = st.back() < b ? 1 : 0;
            break;
        }
        case SimOp::Shl: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = b >= (uint64_t)in.a ? 0 : (st.back() << b) & in.imm;
            break;
        }
        case SimOp::Shr: {
            uint64_t b = st.back(); st.pop_back();
            st.back() = b >= (uint64_t)in.a ? 0 : st.back() >> b;
            break;
        }
        case SimOp::Mux: {
            uint64_t f = st.back(); st.pop_back();
            uint64_t t = st.back(); st.pop_back();
            st.back() = st.back() ? t : f;
            break;
        }
        case SimOp::Slice:
            st.back() = (st.back() >> in.b) & in.imm;
            break;
        case SimOp::Concat: {
            uint64_t lsb = st.back(); st.pop_back();
            st.back() = ((st.back() << in.a) | lsb) & in.imm;
            break;
        }
        case SimOp::Zext:
            break;
        }
    }
    return st.back();
}

void Simulator::eval() {
    for (size_t i = 0; i < cd_->net_slots_.size(); i++)
        vals_[cd_->net_slots_[i]] = run_program(cd_->net_programs_[i]);
}

void Simulator::latch() {
    if (vals_[cd_->rst_slot_]) {
        apply_reset();
        return;
    }
    for (size_t i = 0; i < cd_->reg_slots_.size(); i++)
        next_vals_[i] = run_program(cd_->next_programs_[i]);
    for (size_t i = 0; i < cd_->reg_slots_.size(); i++)
        vals_[cd_->reg_slots_[i]] = next_vals_[i];
}

// ---------------------------------------------------------------------------
// protocol runs

namespace {

void check_stimulus(const Design &d, const Stimulus &s) {
    if (s.t_bound < 1)
        throw StimulusWidthMismatch("t_bound must be >= 1");
    auto check = [&](const std::map<std::string, uint64_t> &m) {
        for (const auto &[name, value] : m) {
            const Port *p = d.find_port(name);
            if (!p || !p->is_input)
                throw StimulusWidthMismatch("stimulus names non-input '" + name + "'");
            if ((value & ~width_mask(p->width)) != 0)
                throw StimulusWidthMismatch("value for '" + name + "' exceeds width " +
                                            std::to_string(p->width));
        }
    };
    check(s.public_inputs);
    check(s.secret_inputs);
}

} // namespace

TraceWitness run(const CompiledDesign &cd, const Stimulus &s, const RunOptions &opts) {
    const Design &d = cd.design();
    check_stimulus(d, s);

    TraceWitness w;
    w.stimulus = s;
    if (opts.record_trace) {
        w.trace_signals.push_back(d.annot.done);
        for (const auto &o : d.annot.observable)
            if (o != d.annot.done)
                w.trace_signals.push_back(o);
        for (const auto &x : opts.extra_signals)
            if (std::find(w.trace_signals.begin(), w.trace_signals.end(), x) ==
                w.trace_signals.end())
                w.trace_signals.push_back(x);
    }
    std::vector<int> trace_slots;
    for (const auto &n : w.trace_signals)
        trace_slots.push_back(cd.slot(n));

    Simulator sim(cd);
    sim.apply_reset();
    const int start_slot = cd.slot(d.annot.start);
    const int rst_slot = cd.slot(kResetName);
    const int done_slot = cd.slot(d.annot.done);
    sim.set_input(cd.slot(kClockName), 0);
    sim.set_input(rst_slot, 0);
    for (const auto &[name, value] : s.all_inputs())
        sim.set_input(name, value);

    int internal_done_slot = -1;
    int compensator_t_max = 0;
    bool internal_done_seen = false;
    if (d.compensator) {
        internal_done_slot = cd.try_slot(d.compensator->internal_done);
        compensator_t_max = d.compensator->t_max;
    }

    for (int k = 0; k <= s.t_bound; k++) {
        sim.set_input(start_slot, k == 0 ? 1 : 0);
        sim.eval();
        if (opts.record_trace) {
            std::vector<uint64_t> row;
            row.reserve(trace_slots.size());
            for (int slot : trace_slots)
                row.push_back(sim.value(slot));
            w.trace.push_back(std::move(row));
        }
        if (internal_done_slot >= 0 && !internal_done_seen && k >= 1 &&
            sim.value(internal_done_slot)) {
            internal_done_seen = true;
            if (k > compensator_t_max)
                w.failed_assertions.push_back("internal done at cycle " + std::to_string(k) +
                                              " after t_max " +
                                              std::to_string(compensator_t_max));
        }
        if (k >= 1 && sim.value(done_slot)) {
            w.completed = true;
            w.latency = k;
            for (const auto &p : d.observable_data_ports())
                w.data_at_done[p.name] = sim.value(p.name);
            break;
        }
        sim.latch();
    }
    return w;
}

TraceWitness run(const Design &d, const Stimulus &s, const RunOptions &opts) {
    CompiledDesign cd(d);
    return run(cd, s, opts);
}

// ---------------------------------------------------------------------------
// exhaustive oracle

std::set<int> ClassHistogram::latencies() const {
    std::set<int> out;
    for (const auto &[k, v] : count_by_latency) {
        (void)v;
        out.insert(k);
    }
    return out;
}

namespace {

// fast path: latency only, no trace allocation
int run_latency(Simulator &sim, int start_slot, int done_slot,
                const std::map<std::string, uint64_t> &inputs, int t_bound) {
    sim.apply_reset();
    for (const auto &[name, value] : inputs)
        sim.set_input(name, value);
    for (int k = 0; k <= t_bound; k++) {
        sim.set_input(start_slot, k == 0 ? 1 : 0);
        sim.eval();
        if (k >= 1 && sim.value(done_slot))
            return k;
        sim.latch();
    }
    return -1;
}

} // namespace

ClassHistogram exhaustive_classes_domain(
    const Design &d, const std::function<bool(std::map<std::string, uint64_t> &)> &domain,
    uint64_t domain_size, int t_bound, const ExhaustiveOptions &opts) {
    CompiledDesign cd(d);

    // materialize assignments in deterministic order, then split across workers
    std::vector<std::map<std::string, uint64_t>> assignments;
    assignments.reserve(domain_size);
    std::map<std::string, uint64_t> a;
    while (domain(a))
        assignments.push_back(a);

    int threads = opts.num_threads > 0 ? opts.num_threads
                                       : (int)std::thread::hardware_concurrency();
    if (threads < 1)
        threads = 1;
    if ((size_t)threads > assignments.size())
        threads = (int)std::max<size_t>(1, assignments.size());

    std::vector<std::vector<int>> latencies((size_t)threads);
    auto worker = [&](int t) {
        Simulator sim(cd);
        const int start_slot = cd.slot(d.annot.start);
        const int done_slot = cd.slot(d.annot.done);
        sim.set_input(cd.slot(kResetName), 0);
        sim.set_input(cd.slot(kClockName), 0);
        size_t lo = assignments.size() * t / threads;
        size_t hi = assignments.size() * (t + 1) / threads;
        auto &out = latencies[t];
        out.reserve(hi - lo);
        for (size_t i = lo; i < hi; i++)
            out.push_back(run_latency(sim, start_slot, done_slot, assignments[i], t_bound));
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; t++)
            pool.emplace_back(worker, t);
        for (auto &th : pool)
            th.join();
    }

    // merge = multiset union of latency observations, in deterministic order
    ClassHistogram h;
    h.runs = assignments.size();
    size_t idx = 0;
    for (int t = 0; t < threads; t++) {
        for (int lat : latencies[t]) {
            const auto &inp = assignments[idx++];
            if (lat < 0) {
                h.noncompleted_total++;
                if (h.noncompleted.size() < 64)
                    h.noncompleted.push_back(inp);
                continue;
            }
            h.count_by_latency[lat]++;
            h.sample_by_latency.emplace(lat, inp);
        }
    }
    if (opts.throw_on_noncompletion && h.noncompleted_total > 0)
        throw SimError("NonCompletion: " + std::to_string(h.noncompleted_total) +
                       " secret(s) never asserted done within bound " +
                       std::to_string(t_bound));
    return h;
}

namespace {

// counter over a list of (name, width) fields; fixed entries merged in
struct FieldCounter {
    std::vector<std::pair<std::string, int>> fields;
    std::map<std::string, uint64_t> fixed;
    std::vector<uint64_t> cur;
    bool first = true;
    bool done = false;

    uint64_t size() const {
        long double total = 1;
        for (const auto &[n, w] : fields) {
            (void)n;
            total *= std::pow(2.0L, w);
        }
        return total > 1e18L ? ~uint64_t(0) : (uint64_t)total;
    }

    bool next(std::map<std::string, uint64_t> &out) {
        if (done)
            return false;
        if (first) {
            cur.assign(fields.size(), 0);
            first = false;
        } else {
            size_t i = 0;
            for (; i < fields.size(); i++) {
                cur[i] = (cur[i] + 1) & width_mask(fields[i].second);
                if (cur[i] != 0)
                    break;
            }
            if (i == fields.size()) {
                done = true;
                return false;
            }
        }
        out = fixed;
        for (size_t i = 0; i < fields.size(); i++)
            out[fields[i].first] = cur[i];
        if (fields.empty())
            done = true;  // single empty assignment
        return true;
    }
};

void guard_width(int total_width, bool force) {
    if (total_width > 24 && !force)
        throw DomainTooLarge("exhaustive domain spans " + std::to_string(total_width) +
                             " bits (> 24); pass force to override");
}

} // namespace

ClassHistogram exhaustive_classes(const Design &d,
                                  const std::map<std::string, uint64_t> &fixed_public,
                                  const std::vector<std::map<std::string, uint64_t>> &secrets,
                                  int t_bound, const ExhaustiveOptions &opts) {
    size_t i = 0;
    auto domain = [&](std::map<std::string, uint64_t> &out) {
        if (i >= secrets.size())
            return false;
        out = fixed_public;
        for (const auto &[k, v] : secrets[i])
            out[k] = v;
        i++;
        return true;
    };
    return exhaustive_classes_domain(d, domain, secrets.size(), t_bound, opts);
}

ClassHistogram exhaustive_classes_all_secrets(const Design &d,
                                              const std::map<std::string, uint64_t> &fixed_public,
                                              int t_bound, const ExhaustiveOptions &opts) {
    FieldCounter c;
    int total = 0;
    for (const auto &p : d.data_inputs()) {
        if (d.annot.secret.count(p.name)) {
            c.fields.push_back({p.name, p.width});
            total += p.width;
        } else {
            auto it = fixed_public.find(p.name);
            c.fixed[p.name] = it == fixed_public.end() ? 0 : it->second;
        }
    }
    guard_width(total, opts.force);
    auto domain = [&c](std::map<std::string, uint64_t> &out) { return c.next(out); };
    return exhaustive_classes_domain(d, domain, c.size(), t_bound, opts);
}

ClassHistogram exhaustive_classes_all_inputs(const Design &d, int t_bound,
                                             const ExhaustiveOptions &opts) {
    FieldCounter c;
    int total = 0;
    for (const auto &p : d.data_inputs()) {
        c.fields.push_back({p.name, p.width});
        total += p.width;
    }
    guard_width(total, opts.force);
    auto domain = [&c](std::map<std::string, uint64_t> &out) { return c.next(out); };
    return exhaustive_classes_domain(d, domain, c.size(), t_bound, opts);
}

// ---------------------------------------------------------------------------
// co-simulation

CosimResult cosim_equiv(const Design &a, const Design &b, uint64_t samples, int t_bound,
                        uint64_t seed) {
    // signature check: same data inputs and same observable data ports
    auto sig = [](const Design &d) {
        std::map<std::string, int> m;
        for (const auto &p : d.data_inputs())
            m[p.name] = p.width;
        return m;
    };
    auto obs = [](const Design &d) {
        std::map<std::string, int> m;
        for (const auto &p : d.observable_data_ports())
            m[p.name] = p.width;
        return m;
    };
    if (sig(a) != sig(b))
        throw SignatureMismatch("designs '" + a.name + "' and '" + b.name +
                                "' have different data input signatures");
    if (obs(a) != obs(b))
        throw SignatureMismatch("designs '" + a.name + "' and '" + b.name +
                                "' have different observable data ports");

    CompiledDesign ca(a), cb(b);
    std::mt19937_64 rng(seed);
    CosimResult res;
    RunOptions fast;
    fast.record_trace = false;

    for (uint64_t i = 0; i < samples; i++) {
        Stimulus s;
        s.t_bound = t_bound;
        for (const auto &p : a.data_inputs()) {
            uint64_t v = rng() & width_mask(p.width);
            if (a.annot.secret.count(p.name))
                s.secret_inputs[p.name] = v;
            else
                s.public_inputs[p.name] = v;
        }
        TraceWitness wa = run(ca, s, fast);
        res.samples++;
        if (!wa.completed) {
            // no observation on the reference side; nothing to compare
            res.skipped_noncompleting++;
            continue;
        }
        TraceWitness wb = run(cb, s, fast);
        if (!wb.completed) {
            res.pass = false;
            res.failing_stimulus = s;
            res.detail = "reference completed at " + std::to_string(wa.latency) +
                         " but '" + b.name + "' never completed";
            return res;
        }
        for (const auto &[port, va] : wa.data_at_done) {
            uint64_t vb = wb.data_at_done.at(port);
            if (va != vb) {
                res.pass = false;
                res.failing_stimulus = s;
                res.detail = "port '" + port + "': " + std::to_string(va) + " vs " +
                             std::to_string(vb) + " (latencies " + std::to_string(wa.latency) +
                             "/" + std::to_string(wb.latency) + ")";
                return res;
            }
        }
    }
    return res;
}

std::string dump_trace(const Design &d, const Stimulus &s, int cycles) {
    CompiledDesign cd(d);
    Simulator sim(cd);
    check_stimulus(d, s);
    sim.apply_reset();
    sim.set_input(kResetName, 0);
    sim.set_input(kClockName, 0);
    for (const auto &[name, value] : s.all_inputs())
        sim.set_input(name, value);

    std::vector<std::string> signals;
    for (const auto &p : d.ports)
        signals.push_back(p.name);
    for (const auto &r : d.regs)
        signals.push_back(r.name);

    std::ostringstream out;
    out << "# trace of " << d.name << "\n";
    for (int k = 0; k < cycles; k++) {
        sim.set_input(d.annot.start, k == 0 ? 1 : 0);
        sim.eval();
        for (const auto &sig : signals)
            out << k << " " << sig << " " << sim.value(sig) << "\n";
        sim.latch();
    }
    return out.str();
}

} // namespace pascal
