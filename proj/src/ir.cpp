#include "pascal/ir.hpp"

#include <algorithm>
#include <functional>

namespace pascal {

const Port *Design::find_port(const std::string &n) const {
    for (const auto &p : ports)
        if (p.name == n)
            return &p;
    return nullptr;
}

const RegDef *Design::find_reg(const std::string &n) const {
    for (const auto &r : regs)
        if (r.name == n)
            return &r;
    return nullptr;
}

const NetDef *Design::find_net(const std::string &n) const {
    for (const auto &w : nets)
        if (w.name == n)
            return &w;
    return nullptr;
}

int Design::signal_width(const std::string &n) const {
    if (const RegDef *r = find_reg(n))
        return r->width;
    if (const NetDef *w = find_net(n))
        return w->width;
    if (const Port *p = find_port(n); p && p->is_input)
        return p->width;
    throw UnknownSignal(n);
}

bool Design::is_declared(const std::string &n) const {
    if (find_reg(n) || find_net(n))
        return true;
    const Port *p = find_port(n);
    return p && p->is_input;
}

std::vector<Port> Design::data_inputs() const {
    std::vector<Port> out;
    for (const auto &p : ports)
        if (p.is_input && p.name != kClockName && p.name != kResetName &&
            p.name != annot.start)
            out.push_back(p);
    return out;
}

std::vector<std::string> Design::public_inputs() const {
    std::vector<std::string> out;
    for (const auto &p : data_inputs())
        if (!annot.secret.count(p.name))
            out.push_back(p.name);
    return out;
}

std::vector<Port> Design::observable_data_ports() const {
    std::vector<Port> out;
    for (const auto &p : ports)
        if (!p.is_input && annot.observable.count(p.name) && p.name != annot.done)
            out.push_back(p);
    return out;
}

namespace {

struct SignalKindWidth {
    enum Kind { Input, Reg, Net } kind;
    int width;
};

void check_expr(const Design &d, const ExprPtr &e, const std::string &owner,
                const std::map<std::string, SignalKindWidth> &table,
                std::vector<Diagnostic> &diags) {
    if (e->op == Op::Var) {
        auto it = table.find(e->name);
        if (it == table.end()) {
            diags.push_back({"UNDECLARED", e->name,
                             "expression in '" + owner + "' references undeclared signal '" +
                                 e->name + "'"});
        } else if (it->second.width != e->width) {
            diags.push_back({"WIDTH_MISMATCH", e->name,
                             "reference to '" + e->name + "' in '" + owner + "' has width " +
                                 std::to_string(e->width) + ", declared " +
                                 std::to_string(it->second.width)});
        }
        if (e->name == kClockName || e->name == kResetName)
            diags.push_back({"CLOCK_IN_EXPR", e->name,
                             "'" + e->name + "' may not appear in expressions (owner '" +
                                 owner + "')"});
        return;
    }
    for (const auto &a : e->args)
        check_expr(d, a, owner, table, diags);
}

} // namespace

std::vector<Diagnostic> validate_design(const Design &d) {
    std::vector<Diagnostic> diags;

    // declaration table; inputs, regs, nets share one namespace
    std::map<std::string, SignalKindWidth> table;
    auto declare = [&](const std::string &n, SignalKindWidth skw) {
        if (table.count(n))
            diags.push_back({"DUP_NAME", n, "'" + n + "' declared more than once"});
        else
            table[n] = skw;
    };
    for (const auto &p : d.ports)
        if (p.is_input)
            declare(p.name, {SignalKindWidth::Input, p.width});
    for (const auto &r : d.regs)
        declare(r.name, {SignalKindWidth::Reg, r.width});
    for (const auto &w : d.nets)
        declare(w.name, {SignalKindWidth::Net, w.width});

    for (const auto &p : d.ports) {
        if (p.width < 1 || p.width > kMaxWidth)
            diags.push_back({"BAD_WIDTH", p.name, "port width out of range"});
        if (!p.is_input) {
            auto it = table.find(p.name);
            if (it == table.end() || it->second.kind == SignalKindWidth::Input)
                diags.push_back({"NO_DRIVER", p.name,
                                 "output port '" + p.name + "' has no driving reg or net"});
            else if (it->second.width != p.width)
                diags.push_back({"WIDTH_MISMATCH", p.name,
                                 "output port '" + p.name + "' width differs from its driver"});
        }
    }

    // exactly one clock and one synchronous reset, both 1-bit inputs
    const Port *clk = d.find_port(kClockName);
    if (!clk || !clk->is_input || clk->width != 1)
        diags.push_back({"NO_CLOCK", kClockName, "design needs a 1-bit input 'clk'"});
    const Port *rst = d.find_port(kResetName);
    if (!rst || !rst->is_input || rst->width != 1)
        diags.push_back({"NO_RESET", kResetName, "design needs a 1-bit input 'rst'"});

    for (const auto &r : d.regs) {
        if (r.width < 1 || r.width > kMaxWidth) {
            diags.push_back({"BAD_WIDTH", r.name, "register width out of range"});
            continue;
        }
        if ((r.reset_value & ~width_mask(r.width)) != 0)
            diags.push_back({"CONST_OVERFLOW", r.name,
                             "reset value does not fit in " + std::to_string(r.width) + " bits"});
        auto it = d.next.find(r.name);
        if (it == d.next.end()) {
            diags.push_back({"NO_NEXT", r.name, "register '" + r.name + "' has no next-state"});
        } else {
            if (it->second->width != r.width)
                diags.push_back({"WIDTH_MISMATCH", r.name,
                                 "next-state of '" + r.name + "' has width " +
                                     std::to_string(it->second->width)});
            check_expr(d, it->second, r.name, table, diags);
        }
    }
    for (const auto &[name, e] : d.next) {
        (void)e;
        if (!d.find_reg(name))
            diags.push_back({"NO_SUCH_REG", name, "next-state for undeclared register"});
    }

    for (const auto &w : d.nets) {
        if (w.width < 1 || w.width > kMaxWidth) {
            diags.push_back({"BAD_WIDTH", w.name, "net width out of range"});
            continue;
        }
        if (!w.expr) {
            diags.push_back({"NO_DRIVER", w.name, "net '" + w.name + "' has no expression"});
            continue;
        }
        if (w.expr->width != w.width)
            diags.push_back({"WIDTH_MISMATCH", w.name,
                             "net '" + w.name + "' declared width " + std::to_string(w.width) +
                                 " but expression has width " + std::to_string(w.expr->width)});
        check_expr(d, w.expr, w.name, table, diags);
    }

    // combinational loops among nets
    if (diags.empty()) {
        try {
            comb_topo_order(d);
        } catch (const CombinationalLoop &cl) {
            diags.push_back({"COMB_LOOP", cl.signal,
                             "combinational loop through net '" + cl.signal + "'"});
        }
    }

    // security annotations
    const auto &an = d.annot;
    for (const auto &s : an.secret) {
        const Port *p = d.find_port(s);
        if (!p || !p->is_input)
            diags.push_back({"SECRET_NOT_INPUT", s, "secret '" + s + "' is not an input port"});
    }
    for (const auto &o : an.observable) {
        const Port *p = d.find_port(o);
        if (!p || p->is_input)
            diags.push_back({"OBSERVABLE_NOT_OUTPUT", o,
                             "observable '" + o + "' is not an output port"});
    }
    for (const auto &s : an.secret)
        if (an.observable.count(s))
            diags.push_back({"SECRET_OBSERVABLE_OVERLAP", s,
                             "'" + s + "' is both secret and observable"});
    {
        const Port *p = an.start.empty() ? nullptr : d.find_port(an.start);
        if (!p || !p->is_input || p->width != 1)
            diags.push_back({"BAD_START", an.start, "start must name a 1-bit input port"});
    }
    {
        const Port *p = an.done.empty() ? nullptr : d.find_port(an.done);
        if (!p || p->is_input || p->width != 1)
            diags.push_back({"BAD_DONE", an.done, "done must name a 1-bit output port"});
        else if (!an.observable.count(an.done))
            diags.push_back({"DONE_NOT_OBSERVABLE", an.done, "done must be observable"});
    }

    return diags;
}

std::vector<std::string> comb_topo_order(const Design &d) {
    // net -> indices of nets it references
    std::map<std::string, size_t> net_index;
    for (size_t i = 0; i < d.nets.size(); i++)
        net_index[d.nets[i].name] = i;

    std::vector<std::vector<size_t>> deps(d.nets.size());
    for (size_t i = 0; i < d.nets.size(); i++) {
        if (!d.nets[i].expr)
            continue;
        std::vector<std::string> vars;
        expr_vars(d.nets[i].expr, vars);
        for (const auto &v : vars) {
            auto it = net_index.find(v);
            if (it != net_index.end())
                deps[i].push_back(it->second);
        }
    }

    std::vector<std::string> order;
    order.reserve(d.nets.size());
    std::vector<bool> placed(d.nets.size(), false);
    // quadratic scan keeps ties in declaration order; design sizes are small
    for (size_t round = 0; round < d.nets.size(); round++) {
        size_t pick = d.nets.size();
        for (size_t i = 0; i < d.nets.size(); i++) {
            if (placed[i])
                continue;
            bool ready = true;
            for (size_t dep : deps[i])
                if (!placed[dep] && dep != i) {
                    ready = false;
                    break;
                }
            // a self-reference is itself a loop
            for (size_t dep : deps[i])
                if (dep == i)
                    ready = false;
            if (ready) {
                pick = i;
                break;
            }
        }
        if (pick == d.nets.size()) {
            for (size_t i = 0; i < d.nets.size(); i++)
                if (!placed[i])
                    throw CombinationalLoop(d.nets[i].name);
        }
        placed[pick] = true;
        order.push_back(d.nets[pick].name);
    }
    return order;
}

std::set<std::string> cone_of_influence(const Design &d, const std::string &target) {
    if (!d.is_declared(target) && !d.find_port(target))
        throw UnknownSignal(target);
    std::set<std::string> cone{target};
    std::vector<std::string> frontier{target};
    while (!frontier.empty()) {
        std::string cur = std::move(frontier.back());
        frontier.pop_back();
        const ExprPtr *def = nullptr;
        if (const NetDef *w = d.find_net(cur))
            def = &w->expr;
        else if (d.find_reg(cur)) {
            auto it = d.next.find(cur);
            if (it != d.next.end())
                def = &it->second;
        }
        if (!def || !*def)
            continue;  // input port or undefined: no fan-in
        std::vector<std::string> vars;
        expr_vars(*def, vars);
        for (auto &v : vars)
            if (cone.insert(v).second)
                frontier.push_back(v);
    }
    return cone;
}

void require_valid(const Design &d) {
    auto diags = validate_design(d);
    if (!diags.empty())
        throw IrError("design '" + d.name + "' is not well-formed:\n" +
                      format_diagnostics(diags));
}

} // namespace pascal
