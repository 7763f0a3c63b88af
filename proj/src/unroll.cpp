#include "pascal/unroll.hpp"

namespace pascal {

UnrolledFormula::UnrolledFormula(int t_bound, size_t clause_budget)
    : gb_(cnf_), t_bound_(t_bound) {
    cnf_.clause_budget = clause_budget;
    if (t_bound < 1)
        throw IrError("t_bound must be >= 1");
}

const UnrolledCopy &UnrolledFormula::add_copy(const Design &d,
                                              const std::map<std::string, Word> *shared_inputs) {
    require_valid(d);
    UnrolledCopy copy;
    copy.design = &d;

    for (const auto &p : d.data_inputs()) {
        if (shared_inputs) {
            auto it = shared_inputs->find(p.name);
            if (it != shared_inputs->end()) {
                copy.data_inputs[p.name] = it->second;
                continue;
            }
        }
        Word w(p.width);
        for (int i = 0; i < p.width; i++)
            w[i] = gb_.fresh();
        copy.data_inputs[p.name] = std::move(w);
    }

    const auto topo = comb_topo_order(d);
    const int T = t_bound_;
    copy.cycles.resize(T + 1);
    copy.done.assign(T + 1, kFalse);
    copy.first_done.assign(T + 1, kFalse);

    // registers enter cycle 0 with reset values (rst was high the cycle before)
    std::map<std::string, Word> regs;
    for (const auto &r : d.regs)
        regs[r.name] = gb_.w_const(r.width, r.reset_value);

    Lit none_before = kTrue;  // no done observed in cycles 1..k-1
    for (int k = 0; k <= T; k++) {
        auto &env = copy.cycles[k];
        env = copy.data_inputs;
        env[kClockName] = {kFalse};
        env[kResetName] = {kFalse};
        env[d.annot.start] = {k == 0 ? kTrue : kFalse};
        for (auto &[name, w] : regs)
            env[name] = w;
        for (const auto &net : topo)
            env[net] = gb_.blast(d.find_net(net)->expr, env);

        copy.done[k] = env.at(d.annot.done)[0];
        if (k >= 1) {
            copy.first_done[k] = gb_.b_and(copy.done[k], none_before);
            none_before = gb_.b_and(none_before, lit_not(copy.done[k]));
        }

        if (k < T) {
            std::map<std::string, Word> next_regs;
            for (const auto &r : d.regs)
                next_regs[r.name] = gb_.blast(d.next.at(r.name), env);
            regs = std::move(next_regs);
        }
    }
    std::vector<Lit> fds(copy.first_done.begin() + 1, copy.first_done.end());
    copy.completed = gb_.b_or_many(fds);

    copies_.push_back(std::move(copy));
    return copies_.back();
}

Stimulus UnrolledFormula::decode_stimulus(const SatResult &model, size_t copy_idx) const {
    const UnrolledCopy &c = copies_.at(copy_idx);
    Stimulus s;
    s.t_bound = t_bound_;
    for (const auto &[name, w] : c.data_inputs) {
        uint64_t v = decode_word(w, model.model);
        if (c.design->annot.secret.count(name))
            s.secret_inputs[name] = v;
        else
            s.public_inputs[name] = v;
    }
    return s;
}

int UnrolledFormula::decode_latency(const SatResult &model, size_t copy_idx) const {
    const UnrolledCopy &c = copies_.at(copy_idx);
    for (int k = 1; k <= t_bound_; k++)
        if (decode_word({c.first_done[k]}, model.model))
            return k;
    return 0;
}

TraceWitness UnrolledFormula::decode_witness(const SatResult &model, size_t copy_idx) const {
    const UnrolledCopy &c = copies_.at(copy_idx);
    const Design &d = *c.design;
    TraceWitness w;
    w.stimulus = decode_stimulus(model, copy_idx);
    int latency = decode_latency(model, copy_idx);
    w.completed = latency > 0;
    w.latency = latency;

    w.trace_signals.push_back(d.annot.done);
    for (const auto &o : d.annot.observable)
        if (o != d.annot.done)
            w.trace_signals.push_back(o);
    int last = w.completed ? latency : t_bound_;
    for (int k = 0; k <= last; k++) {
        std::vector<uint64_t> row;
        for (const auto &sig : w.trace_signals)
            row.push_back(decode_word(c.cycles[k].at(sig), model.model));
        w.trace.push_back(std::move(row));
    }
    if (w.completed)
        for (const auto &p : d.observable_data_ports())
            w.data_at_done[p.name] = decode_word(c.cycles[latency].at(p.name), model.model);
    return w;
}

std::unique_ptr<UnrolledFormula> unroll_and_blast(const Design &d, int t_bound,
                                                  size_t clause_budget) {
    auto f = std::make_unique<UnrolledFormula>(t_bound, clause_budget);
    f->add_copy(d);
    return f;
}

} // namespace pascal
