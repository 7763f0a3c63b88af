#include "pascal/compensator.hpp"

#include <algorithm>

namespace pascal {

int compensator_counter_width(int t_max) {
    int w = 1;
    while ((uint64_t(1) << w) < (uint64_t)t_max + 1)
        w++;
    return w;
}

CompensatorSpec synthesize_spec(const TimingClassReport &r) {
    if (!r.exhausted)
        throw NotExhaustive("refusing to harden from a non-exhaustive class report");
    if (r.classes.empty())
        throw EmptyReport("class report is empty; nothing to harden against");
    CompensatorSpec spec;
    spec.t_max = r.t_max();
    spec.counter_width = compensator_counter_width(spec.t_max);
    return spec;
}

namespace {

std::string fresh_suffix_name(const Design &d, const std::string &base,
                              const std::vector<std::string> &also_taken) {
    auto taken = [&](const std::string &n) {
        if (d.is_declared(n) || d.find_port(n))
            return true;
        return std::find(also_taken.begin(), also_taken.end(), n) != also_taken.end();
    };
    std::string cand = base;
    for (int i = 2; i < 100; i++) {
        if (!taken(cand))
            return cand;
        cand = base + std::to_string(i);
    }
    throw PortCollision("no free name for '" + base + "'");
}

} // namespace

HardenResult harden(const Design &d, const CompensatorSpec &spec_in) {
    require_valid(d);
    if (spec_in.t_max < 1)
        throw EmptyReport("compensator t_max must be >= 1");

    HardenResult out;
    out.spec = spec_in;
    CompensatorSpec &spec = out.spec;
    spec.gated_ports.clear();

    const int w = spec.counter_width;
    const std::string done = d.annot.done;
    std::vector<Port> data_ports = d.observable_data_ports();

    // the observable signals move inward under fresh names; everything they
    // referenced keeps its meaning through a consistent rename
    std::vector<std::string> taken;
    std::vector<std::pair<std::string, std::string>> renames;
    for (const auto &p : data_ports) {
        std::string internal = fresh_suffix_name(d, p.name + "_duv", taken);
        taken.push_back(internal);
        renames.push_back({p.name, internal});
    }
    std::string done_internal = fresh_suffix_name(d, done + "_duv", taken);
    taken.push_back(done_internal);
    renames.push_back({done, done_internal});

    auto renamed = [&](const std::string &n) {
        for (const auto &[from, to] : renames)
            if (n == from)
                return to;
        return n;
    };

    Design s;
    s.name = d.name + "_sduv";
    s.ports = d.ports;  // identical interface
    for (const auto &r : d.regs)
        s.regs.push_back({renamed(r.name), r.width, r.reset_value});
    for (const auto &n : d.nets)
        s.nets.push_back({renamed(n.name), n.width, expr_rename(n.expr, renames)});
    for (const auto &[reg, next] : d.next)
        s.next[renamed(reg)] = expr_rename(next, renames);
    s.annot = d.annot;

    std::string cnt = fresh_suffix_name(s, "cmp_cnt", taken);
    taken.push_back(cnt);
    std::string seen = fresh_suffix_name(s, "cmp_seen", taken);
    taken.push_back(seen);
    std::string capture = fresh_suffix_name(s, "cmp_capture", taken);
    taken.push_back(capture);

    ExprPtr start_v = e_var(d.annot.start, 1);
    ExprPtr cnt_v = e_var(cnt, w);
    ExprPtr seen_v = e_var(seen, 1);
    ExprPtr done_i = e_var(done_internal, 1);
    ExprPtr tmax_c = e_const(w, (uint64_t)spec.t_max);

    // counter to t_max, saturating; restarted by the start pulse
    s.regs.push_back({cnt, w, 0});
    s.next[cnt] = e_mux(start_v, e_const(w, 1),
                        e_mux(e_cmp(Op::Eq, cnt_v, tmax_c), cnt_v,
                              e_bin(Op::Add, cnt_v, e_const(w, 1))));

    // first-completion latch and the capture strobe
    s.regs.push_back({seen, 1, 0});
    s.next[seen] = e_mux(start_v, e_const(1, 0), e_bin(Op::Or, seen_v, done_i));
    s.nets.push_back({capture, 1, e_bin(Op::And, done_i, e_not(seen_v))});

    // per-port holding register; the exposed port bypasses it on the capture
    // cycle so data is live even when the internal run lands exactly on t_max
    for (const auto &p : data_ports) {
        std::string hold = fresh_suffix_name(s, "hold_" + p.name, taken);
        taken.push_back(hold);
        ExprPtr hold_v = e_var(hold, p.width);
        ExprPtr internal_v = e_var(renamed(p.name), p.width);
        s.regs.push_back({hold, p.width, 0});
        s.next[hold] = e_mux(start_v, e_const(p.width, 0),
                             e_mux(e_var(capture, 1), internal_v, hold_v));
        s.nets.push_back({p.name, p.width,
                          e_mux(e_var(capture, 1), internal_v, hold_v)});
        spec.gated_ports.push_back({p.name, hold});
    }

    // exposed done: exactly at counter == t_max (and held there)
    s.nets.push_back({done, 1, e_cmp(Op::Eq, cnt_v, tmax_c)});

    s.compensator = CompensatorMeta{done_internal, spec.t_max};

    auto diags = validate_design(s);
    if (!diags.empty())
        throw PortCollision("hardened design failed validation:\n" +
                            format_diagnostics(diags));
    out.sduv = std::move(s);
    return out;
}

OverheadReport overhead(const TimingClassReport &r, const Design &d) {
    if (!r.exhausted)
        throw NotExhaustive("overhead needs an exhaustive class report");
    OverheadReport o;
    int t_max = r.t_max();
    o.counter_flops = r.classes.empty() ? 0 : compensator_counter_width(t_max);
    for (const auto &p : d.observable_data_ports())
        o.holding_flops += p.width;
    o.total_added_flops = o.counter_flops + o.holding_flops + 1;  // + capture latch
    for (const auto &c : r.classes)
        o.path_balanced_unit += t_max - c.latency;
    o.path_balanced_scaled = o.path_balanced_unit * (long)o.holding_flops;
    if (o.path_balanced_unit == 0) {
        o.savings_ratio = 1.0;
        o.note = "single timing class: path balancing would add nothing either";
    } else {
        o.savings_ratio = (double)o.path_balanced_unit / (double)o.total_added_flops;
    }
    return o;
}

bool structurally_contains(const Design &original, const Design &hardened,
                           const std::vector<std::pair<std::string, std::string>> &renames) {
    auto renamed = [&](const std::string &n) {
        for (const auto &[from, to] : renames)
            if (n == from)
                return to;
        return n;
    };
    // every original net definition must appear verbatim (modulo the declared
    // renames) among the hardened nets, and likewise for next-state functions
    for (const auto &n : original.nets) {
        const NetDef *h = hardened.find_net(renamed(n.name));
        if (!h)
            return false;
        if (!expr_equal(expr_rename(n.expr, renames), h->expr))
            return false;
    }
    for (const auto &[reg, next] : original.next) {
        auto it = hardened.next.find(renamed(reg));
        if (it == hardened.next.end())
            return false;
        if (!expr_equal(expr_rename(next, renames), it->second))
            return false;
    }
    for (const auto &r : original.regs) {
        const RegDef *h = hardened.find_reg(renamed(r.name));
        if (!h || h->width != r.width || h->reset_value != r.reset_value)
            return false;
    }
    return true;
}

} // namespace pascal
