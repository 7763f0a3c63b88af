#include <algorithm>
#include <chrono>
#include <cmath>

#include "pascal/solver.hpp"

namespace pascal {

namespace {

using ClauseRef = uint32_t;
constexpr ClauseRef kNoClause = ~ClauseRef(0);

// Clause arena. Layout per clause: [size<<1 | learnt][lbd][lit0]...[litN-1]
struct Arena {
    std::vector<uint32_t> mem;

    ClauseRef alloc(const std::vector<Lit> &lits, bool learnt, uint32_t lbd) {
        ClauseRef r = (ClauseRef)mem.size();
        mem.push_back(((uint32_t)lits.size() << 1) | (learnt ? 1 : 0));
        mem.push_back(lbd);
        for (Lit l : lits)
            mem.push_back((uint32_t)l);
        return r;
    }
    uint32_t size(ClauseRef r) const { return mem[r] >> 1; }
    bool learnt(ClauseRef r) const { return mem[r] & 1; }
    uint32_t lbd(ClauseRef r) const { return mem[r + 1]; }
    void set_lbd(ClauseRef r, uint32_t v) { mem[r + 1] = v; }
    Lit *lits(ClauseRef r) { return (Lit *)&mem[r + 2]; }
    const Lit *lits(ClauseRef r) const { return (const Lit *)&mem[r + 2]; }
};

struct Watcher {
    ClauseRef cref;
    Lit blocker;
};

// max-heap over variable activities
struct VarHeap {
    std::vector<int> heap;
    std::vector<int> pos;  // var -> heap index, -1 when absent
    const std::vector<double> *act = nullptr;

    bool less(int a, int b) const { return (*act)[a] < (*act)[b]; }

    void up(int i) {
        int v = heap[i];
        while (i > 0) {
            int p = (i - 1) >> 1;
            if (!less(heap[p], v))
                break;
            heap[i] = heap[p];
            pos[heap[i]] = i;
            i = p;
        }
        heap[i] = v;
        pos[v] = i;
    }
    void down(int i) {
        int v = heap[i];
        for (;;) {
            int c = 2 * i + 1;
            if (c >= (int)heap.size())
                break;
            if (c + 1 < (int)heap.size() && less(heap[c], heap[c + 1]))
                c++;
            if (!less(v, heap[c]))
                break;
            heap[i] = heap[c];
            pos[heap[i]] = i;
            i = c;
        }
        heap[i] = v;
        pos[v] = i;
    }
    bool contains(int v) const { return v < (int)pos.size() && pos[v] >= 0; }
    void insert(int v) {
        if (contains(v))
            return;
        if ((int)pos.size() <= v)
            pos.resize(v + 1, -1);
        heap.push_back(v);
        pos[v] = (int)heap.size() - 1;
        up((int)heap.size() - 1);
    }
    int pop() {
        int v = heap[0];
        pos[v] = -1;
        heap[0] = heap.back();
        heap.pop_back();
        if (!heap.empty()) {
            pos[heap[0]] = 0;
            down(0);
        }
        return v;
    }
    void update(int v) {
        if (contains(v))
            up(pos[v]);
    }
    bool empty() const { return heap.empty(); }
    void clear() {
        heap.clear();
        pos.clear();
    }
};

double luby(double y, int x) {
    int size, seq;
    for (size = 1, seq = 0; size < x + 1; seq++, size = 2 * size + 1) {
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        seq--;
        x = x % size;
    }
    return std::pow(y, seq);
}

class Cdcl final : public SatSolver {
public:
    void load(const Cnf &cnf) override {
        arena_.mem.clear();
        learnts_.clear();
        watches_.clear();
        assigns_.clear();
        level_.clear();
        reason_.clear();
        trail_.clear();
        trail_lim_.clear();
        activity_.clear();
        phase_.clear();
        seen_.clear();
        heap_.clear();
        qhead_ = 0;
        ok_ = true;
        num_vars_ = cnf.num_vars;
        conflicts_total_ = 0;

        assigns_.assign(num_vars_, -1);
        level_.assign(num_vars_, 0);
        reason_.assign(num_vars_, kNoClause);
        activity_.assign(num_vars_, 0.0);
        phase_.assign(num_vars_, 0);
        seen_.assign(num_vars_, 0);
        watches_.assign(2 * num_vars_, {});
        heap_.act = &activity_;
        for (int v = 0; v < num_vars_; v++)
            heap_.insert(v);
        var_inc_ = 1.0;

        for (const auto &c : cnf.clauses)
            add_clause(c);
    }

    void add_clause(const std::vector<Lit> &lits_in) override {
        // called at decision level 0: drop false lits, detect tautology
        if (!ok_)
            return;
        std::vector<Lit> lits;
        lits.reserve(lits_in.size());
        for (Lit l : lits_in) {
            int8_t v = value(l);
            if (v == 1)
                return;  // satisfied at level 0
            if (v == 0)
                continue;  // false at level 0, drop
            if (std::find(lits.begin(), lits.end(), l) != lits.end())
                continue;
            if (std::find(lits.begin(), lits.end(), lit_not(l)) != lits.end())
                return;  // tautology
            lits.push_back(l);
        }
        if (lits.empty()) {
            ok_ = false;
            return;
        }
        if (lits.size() == 1) {
            enqueue(lits[0], kNoClause);
            if (propagate() != kNoClause)
                ok_ = false;
            return;
        }
        ClauseRef r = arena_.alloc(lits, false, 0);
        attach(r);
    }

    SatResult solve(const SolverLimits &limits) override {
        auto t0 = std::chrono::steady_clock::now();
        SatResult res;
        if (!ok_) {
            res.status = SatStatus::Unsat;
            return res;
        }
        int restarts = 0;
        uint64_t conflicts_budget_start = conflicts_total_;
        int64_t next_reduce = 4000;
        int reduces = 0;

        for (;;) {
            int64_t restart_budget = (int64_t)(luby(2.0, restarts) * 128);
            int64_t conflicts_this_restart = 0;
            for (;;) {
                ClauseRef confl = propagate();
                if (confl != kNoClause) {
                    conflicts_total_++;
                    conflicts_this_restart++;
                    if (decision_level() == 0) {
                        ok_ = false;
                        res.status = SatStatus::Unsat;
                        res.conflicts = conflicts_total_ - conflicts_budget_start;
                        finish(res, t0);
                        return res;
                    }
                    std::vector<Lit> learnt;
                    int bt_level;
                    uint32_t lbd;
                    analyze(confl, learnt, bt_level, lbd);
                    cancel_until(bt_level);
                    if (learnt.size() == 1) {
                        enqueue(learnt[0], kNoClause);
                    } else {
                        ClauseRef r = arena_.alloc(learnt, true, lbd);
                        learnts_.push_back(r);
                        attach(r);
                        enqueue(learnt[0], r);
                    }
                    var_inc_ *= (1.0 / 0.95);
                    if (var_inc_ > 1e100)
                        rescale_activity();

                    uint64_t used = conflicts_total_ - conflicts_budget_start;
                    if (limits.max_conflicts >= 0 && (int64_t)used > limits.max_conflicts) {
                        res.status = SatStatus::Unknown;
                        res.conflicts = used;
                        cancel_until(0);
                        finish(res, t0);
                        return res;
                    }
                    if (limits.timeout_ms > 0 && (used & 1023) == 0) {
                        double ms = std::chrono::duration<double, std::milli>(
                                        std::chrono::steady_clock::now() - t0)
                                        .count();
                        if (ms > limits.timeout_ms) {
                            res.status = SatStatus::Unknown;
                            res.conflicts = used;
                            cancel_until(0);
                            finish(res, t0);
                            return res;
                        }
                    }
                    if ((int64_t)used > next_reduce) {
                        reduces++;
                        next_reduce += 4000 + 600 * reduces;
                        reduce_db();
                    }
                } else {
                    if (conflicts_this_restart >= restart_budget && decision_level() > 0) {
                        cancel_until(0);
                        break;  // restart
                    }
                    // decide
                    int next = -1;
                    while (!heap_.empty()) {
                        int v = heap_.pop();
                        if (assigns_[v] == -1) {
                            next = v;
                            break;
                        }
                    }
                    if (next == -1) {
                        res.status = SatStatus::Sat;
                        res.model.assign(num_vars_, 0);
                        for (int v = 0; v < num_vars_; v++)
                            res.model[v] = assigns_[v] == 1 ? 1 : 0;
                        res.conflicts = conflicts_total_ - conflicts_budget_start;
                        cancel_until(0);
                        finish(res, t0);
                        return res;
                    }
                    trail_lim_.push_back((int)trail_.size());
                    enqueue(mk_lit(next, phase_[next] == 0), kNoClause);
                }
            }
            restarts++;
        }
    }

private:
    Arena arena_;
    std::vector<ClauseRef> learnts_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<int8_t> assigns_;  // per var: -1 unassigned, 0 false, 1 true
    std::vector<int> level_;
    std::vector<ClauseRef> reason_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::vector<double> activity_;
    std::vector<uint8_t> phase_;
    std::vector<uint8_t> seen_;
    VarHeap heap_;
    size_t qhead_ = 0;
    bool ok_ = true;
    int num_vars_ = 0;
    double var_inc_ = 1.0;
    uint64_t conflicts_total_ = 0;

    int decision_level() const { return (int)trail_lim_.size(); }

    int8_t value(Lit l) const {
        int8_t a = assigns_[lit_var(l)];
        if (a == -1)
            return -1;
        return (int8_t)(a ^ (int8_t)lit_sign(l));
    }

    void finish(SatResult &res, std::chrono::steady_clock::time_point t0) {
        res.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
    }

    void attach(ClauseRef r) {
        Lit *c = arena_.lits(r);
        watches_[lit_not(c[0])].push_back({r, c[1]});
        watches_[lit_not(c[1])].push_back({r, c[0]});
    }

    void enqueue(Lit l, ClauseRef from) {
        int v = lit_var(l);
        assigns_[v] = lit_sign(l) ? 0 : 1;
        level_[v] = decision_level();
        reason_[v] = from;
        trail_.push_back(l);
    }

    ClauseRef propagate() {
        while (qhead_ < trail_.size()) {
            Lit p = trail_[qhead_++];
            auto &ws = watches_[p];
            size_t i = 0, j = 0;
            ClauseRef confl = kNoClause;
            while (i < ws.size()) {
                Watcher w = ws[i];
                if (value(w.blocker) == 1) {
                    ws[j++] = ws[i++];
                    continue;
                }
                ClauseRef r = w.cref;
                Lit *c = arena_.lits(r);
                uint32_t sz = arena_.size(r);
                // make c[1] the literal falsified by p
                Lit false_lit = lit_not(p);
                if (c[0] == false_lit)
                    std::swap(c[0], c[1]);
                if (value(c[0]) == 1) {
                    ws[j++] = {r, c[0]};
                    i++;
                    continue;
                }
                bool moved = false;
                for (uint32_t k = 2; k < sz; k++) {
                    if (value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches_[lit_not(c[1])].push_back({r, c[0]});
                        moved = true;
                        break;
                    }
                }
                if (moved) {
                    i++;
                    continue;
                }
                if (value(c[0]) == 0) {
                    confl = r;
                    // copy remaining watchers and bail
                    while (i < ws.size())
                        ws[j++] = ws[i++];
                    ws.resize(j);
                    qhead_ = trail_.size();
                    return confl;
                }
                ws[j++] = {r, c[0]};
                i++;
                enqueue(c[0], r);
            }
            ws.resize(j);
        }
        return kNoClause;
    }

    void bump(int v) {
        activity_[v] += var_inc_;
        if (activity_[v] > 1e100)
            rescale_activity();
        heap_.update(v);
    }

    void rescale_activity() {
        for (auto &a : activity_)
            a *= 1e-100;
        var_inc_ *= 1e-100;
        // heap order unchanged by uniform scaling
    }

    void analyze(ClauseRef confl, std::vector<Lit> &learnt, int &bt_level, uint32_t &lbd) {
        learnt.clear();
        learnt.push_back(0);  // placeholder for the asserting literal
        int path_count = 0;
        Lit p = -1;
        size_t index = trail_.size();

        ClauseRef cr = confl;
        do {
            const Lit *c = arena_.lits(cr);
            uint32_t sz = arena_.size(cr);
            for (uint32_t k = (p == -1 ? 0 : 1); k < sz; k++) {
                Lit q = c[k];
                int v = lit_var(q);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump(v);
                    if (level_[v] >= decision_level())
                        path_count++;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[lit_var(trail_[--index])]) {
            }
            p = trail_[index];
            cr = reason_[lit_var(p)];
            seen_[lit_var(p)] = 0;
            path_count--;
        } while (path_count > 0);
        learnt[0] = lit_not(p);

        // recursive minimization: drop literals implied by the rest
        std::vector<Lit> minimized;
        minimized.push_back(learnt[0]);
        for (size_t k = 1; k < learnt.size(); k++) {
            if (reason_[lit_var(learnt[k])] == kNoClause || !redundant(learnt[k]))
                minimized.push_back(learnt[k]);
        }
        for (size_t k = 1; k < learnt.size(); k++)
            seen_[lit_var(learnt[k])] = 0;
        learnt = std::move(minimized);

        // backtrack level: highest level below the current one
        bt_level = 0;
        if (learnt.size() > 1) {
            size_t max_i = 1;
            for (size_t k = 2; k < learnt.size(); k++)
                if (level_[lit_var(learnt[k])] > level_[lit_var(learnt[max_i])])
                    max_i = k;
            std::swap(learnt[1], learnt[max_i]);
            bt_level = level_[lit_var(learnt[1])];
        }
        // literal-block distance
        std::vector<int> levels;
        for (Lit l : learnt)
            levels.push_back(level_[lit_var(l)]);
        std::sort(levels.begin(), levels.end());
        lbd = (uint32_t)(std::unique(levels.begin(), levels.end()) - levels.begin());
    }

    // true when l is implied by other marked literals (safe to drop)
    bool redundant(Lit l) {
        std::vector<Lit> stack{l};
        std::vector<int> touched;
        bool ok = true;
        while (!stack.empty() && ok) {
            Lit q = stack.back();
            stack.pop_back();
            ClauseRef cr = reason_[lit_var(q)];
            if (cr == kNoClause) {
                ok = false;
                break;
            }
            const Lit *c = arena_.lits(cr);
            uint32_t sz = arena_.size(cr);
            for (uint32_t k = 1; k < sz; k++) {
                Lit r = c[k];
                int v = lit_var(r);
                if (seen_[v] || level_[v] == 0)
                    continue;
                if (reason_[v] == kNoClause) {
                    ok = false;
                    break;
                }
                seen_[v] = 1;
                touched.push_back(v);
                stack.push_back(r);
            }
        }
        if (!ok)
            for (int v : touched)
                seen_[v] = 0;
        // on success leave marks set: they are cleared by the caller only for
        // original learnt lits, so mark these as permanently seen-for-now
        if (ok)
            for (int v : touched)
                cleanup_.push_back(v);
        return ok;
    }

    std::vector<int> cleanup_;

    void cancel_until(int lvl) {
        if (decision_level() <= lvl) {
            for (int v : cleanup_)
                seen_[v] = 0;
            cleanup_.clear();
            return;
        }
        for (int i = (int)trail_.size() - 1; i >= trail_lim_[lvl]; i--) {
            int v = lit_var(trail_[i]);
            phase_[v] = assigns_[v] == 1 ? 1 : 0;
            assigns_[v] = -1;
            reason_[v] = kNoClause;
            heap_.insert(v);
        }
        trail_.resize(trail_lim_[lvl]);
        trail_lim_.resize(lvl);
        qhead_ = trail_.size();
        for (int v : cleanup_)
            seen_[v] = 0;
        cleanup_.clear();
    }

    void reduce_db() {
        // keep locked clauses and small-LBD clauses; drop the worse half
        std::vector<ClauseRef> sorted = learnts_;
        std::sort(sorted.begin(), sorted.end(), [&](ClauseRef a, ClauseRef b) {
            return arena_.lbd(a) < arena_.lbd(b);
        });
        std::vector<ClauseRef> keep;
        std::vector<bool> drop_set;
        size_t limit = sorted.size() / 2;
        std::vector<ClauseRef> dropped;
        for (size_t i = 0; i < sorted.size(); i++) {
            ClauseRef r = sorted[i];
            bool locked = false;
            Lit first = arena_.lits(r)[0];
            if (value(first) == 1 && reason_[lit_var(first)] == r)
                locked = true;
            if (locked || arena_.lbd(r) <= 3 || i < limit)
                keep.push_back(r);
            else
                dropped.push_back(r);
        }
        if (dropped.empty())
            return;
        learnts_ = keep;
        // rebuild all watch lists without the dropped clauses
        std::sort(dropped.begin(), dropped.end());
        auto is_dropped = [&](ClauseRef r) {
            return std::binary_search(dropped.begin(), dropped.end(), r);
        };
        for (auto &ws : watches_) {
            size_t j = 0;
            for (size_t i = 0; i < ws.size(); i++)
                if (!is_dropped(ws[i].cref))
                    ws[j++] = ws[i];
            ws.resize(j);
        }
    }
};

} // namespace

std::unique_ptr<SatSolver> make_cdcl_solver() { return std::make_unique<Cdcl>(); }

} // namespace pascal
