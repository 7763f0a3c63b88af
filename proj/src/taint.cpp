#include "pascal/taint.hpp"

namespace pascal {

std::set<std::string> TaintState::tainted_set() const {
    std::set<std::string> out;
    for (const auto &[name, t] : tainted)
        if (t)
            out.insert(name);
    return out;
}

namespace {

bool expr_tainted(const ExprPtr &e, const std::map<std::string, bool> &labels) {
    if (e->op == Op::Var) {
        auto it = labels.find(e->name);
        return it != labels.end() && it->second;
    }
    for (const auto &a : e->args)
        if (expr_tainted(a, labels))
            return true;
    return false;
}

} // namespace

TaintState propagate(const Design &d) {
    require_valid(d);
    TaintState st;
    for (const auto &p : d.ports)
        if (p.is_input)
            st.tainted[p.name] = d.annot.secret.count(p.name) > 0;
    for (const auto &r : d.regs)
        st.tainted[r.name] = false;
    for (const auto &w : d.nets)
        st.tainted[w.name] = false;

    // least fixpoint; labels only move clean -> tainted, so at most |signals|
    // passes are needed
    const int max_iters = (int)st.tainted.size() + 1;
    for (st.iterations = 0; st.iterations < max_iters; st.iterations++) {
        std::vector<std::string> newly;
        for (const auto &w : d.nets) {
            if (!st.tainted[w.name] && expr_tainted(w.expr, st.tainted)) {
                st.tainted[w.name] = true;
                newly.push_back(w.name);
            }
        }
        for (const auto &r : d.regs) {
            if (!st.tainted[r.name] && expr_tainted(d.next.at(r.name), st.tainted)) {
                st.tainted[r.name] = true;
                newly.push_back(r.name);
            }
        }
        if (newly.empty())
            break;
        st.frontier_log.push_back(std::move(newly));
    }
    return st;
}

SecurityPathResult has_security_path(const Design &d) {
    SecurityPathResult res;
    res.state = propagate(d);
    for (const auto &o : d.annot.observable) {
        if (!res.state.is_tainted(o))
            continue;
        res.verdict = PathVerdict::PathExists;
        std::set<std::string> cone = cone_of_influence(d, o);
        std::set<std::string> witness;
        for (const auto &s : cone)
            if (res.state.is_tainted(s) || d.annot.secret.count(s))
                witness.insert(s);
        res.witness_cones[o] = std::move(witness);
    }
    return res;
}

} // namespace pascal
