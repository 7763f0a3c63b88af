#include <algorithm>
#include <map>

#include "pascal/hdl.hpp"

namespace pascal {

namespace {

struct Symbol {
    enum class Kind { Input, OutputWire, OutputReg, Wire, Reg } kind;
    int width = 1;

    bool is_reg() const { return kind == Kind::OutputReg || kind == Kind::Reg; }
    bool is_wire() const { return kind == Kind::OutputWire || kind == Kind::Wire; }
};

struct Elab {
    const SourceModule &m;
    const PragmaSet &p;
    std::map<std::string, Symbol> symbols = {};
    std::vector<std::string> decl_order_wires = {};
    std::vector<std::string> decl_order_regs = {};

    [[noreturn]] void fail(const std::string &code, const std::string &msg, int line = 0,
                           int col = 0) const {
        std::string where;
        if (line)
            where = " at " + std::to_string(line) + ":" + std::to_string(col);
        throw ElabError(code, msg + where);
    }

    const Symbol &lookup(const std::string &name, int line, int col) {
        auto it = symbols.find(name);
        if (it == symbols.end())
            fail("UNDECLARED", "'" + name + "' used before declaration", line, col);
        return it->second;
    }

    void declare(const std::string &name, Symbol s, int line, int col) {
        if (symbols.count(name))
            fail("DUP_NAME", "'" + name + "' declared twice", line, col);
        symbols[name] = s;
    }

    void build_symbols() {
        for (const auto &port : m.ports) {
            Symbol s;
            s.width = port.width;
            s.kind = port.is_input ? Symbol::Kind::Input
                                   : (port.is_reg ? Symbol::Kind::OutputReg
                                                  : Symbol::Kind::OutputWire);
            declare(port.name, s, port.line, port.col);
            if (s.kind == Symbol::Kind::OutputReg)
                decl_order_regs.push_back(port.name);
            else if (s.kind == Symbol::Kind::OutputWire)
                decl_order_wires.push_back(port.name);
        }
        for (const auto &d : m.decls) {
            Symbol s;
            s.width = d.width;
            s.kind = d.is_reg ? Symbol::Kind::Reg : Symbol::Kind::Wire;
            declare(d.name, s, d.line, d.col);
            if (d.is_reg)
                decl_order_regs.push_back(d.name);
            else
                decl_order_wires.push_back(d.name);
        }
        if (!symbols.count(kClockName) || symbols[kClockName].kind != Symbol::Kind::Input ||
            symbols[kClockName].width != 1)
            fail("NO_CLOCK", "module must declare 1-bit input 'clk'");
        if (!symbols.count(kResetName) || symbols[kResetName].kind != Symbol::Kind::Input ||
            symbols[kResetName].width != 1)
            fail("NO_RESET", "module must declare 1-bit input 'rst'");
    }

    bool mentions(const AstExprPtr &e, const std::string &name) const {
        if (!e)
            return false;
        if ((e->kind == AstExpr::Kind::Ident || e->kind == AstExpr::Kind::Index) &&
            e->name == name)
            return true;
        for (const auto &a : e->args)
            if (mentions(a, name))
                return true;
        return false;
    }

    bool stmt_mentions(const AstStmtPtr &s, const std::string &name) const {
        if (!s)
            return false;
        if (mentions(s->cond, name) || mentions(s->rhs, name))
            return true;
        if (stmt_mentions(s->then_stmt, name) || stmt_mentions(s->else_stmt, name))
            return true;
        for (const auto &c : s->stmts)
            if (stmt_mentions(c, name))
                return true;
        return false;
    }

    // Natural-width elaboration. Unsized literals take their minimal width
    // and get zero-extended by context.
    ExprPtr elab_expr(const AstExprPtr &e) {
        switch (e->kind) {
        case AstExpr::Kind::Number: {
            if (e->width > 0)
                return e_const(e->width, e->value);
            int w = 1;
            while (w < kMaxWidth && (e->value >> w) != 0)
                w++;
            return e_const(w, e->value);
        }
        case AstExpr::Kind::Ident: {
            const Symbol &s = lookup(e->name, e->line, e->col);
            if (e->name == kClockName || e->name == kResetName)
                fail("CLOCK_IN_EXPR",
                     "'" + e->name + "' may only appear in 'always @(posedge clk)' / "
                     "'if (rst)' positions",
                     e->line, e->col);
            return e_var(e->name, s.width);
        }
        case AstExpr::Kind::Index: {
            const Symbol &s = lookup(e->name, e->line, e->col);
            if (e->hi < e->lo || e->hi >= s.width)
                fail("BAD_SLICE",
                     "slice [" + std::to_string(e->hi) + ":" + std::to_string(e->lo) +
                         "] out of range for '" + e->name + "' of width " +
                         std::to_string(s.width),
                     e->line, e->col);
            return e_slice(e_var(e->name, s.width), e->hi, e->lo);
        }
        case AstExpr::Kind::Unary: {
            ExprPtr a = elab_expr(e->args[0]);
            if (e->unary_op == '~')
                return e_not(a);
            return e_bin(Op::Sub, e_const(a->width, 0), a);  // unary minus
        }
        case AstExpr::Kind::Binary: {
            ExprPtr a = elab_expr(e->args[0]);
            ExprPtr b = elab_expr(e->args[1]);
            const std::string &op = e->bin_op;
            if (op == "<<" || op == ">>")
                return e_shift(op == "<<" ? Op::Shl : Op::Shr, a, b);
            // zero-extend the narrower operand
            int w = std::max(a->width, b->width);
            a = e_zext(a, w);
            b = e_zext(b, w);
            if (op == "+") return e_bin(Op::Add, a, b);
            if (op == "-") return e_bin(Op::Sub, a, b);
            if (op == "*") return e_bin(Op::Mul, a, b);
            if (op == "&") return e_bin(Op::And, a, b);
            if (op == "|") return e_bin(Op::Or, a, b);
            if (op == "^") return e_bin(Op::Xor, a, b);
            if (op == "==") return e_cmp(Op::Eq, a, b);
            if (op == "!=") return e_cmp(Op::Neq, a, b);
            if (op == "<") return e_cmp(Op::Lt, a, b);
            fail("BAD_OP", "unknown operator " + op, e->line, e->col);
        }
        case AstExpr::Kind::Ternary: {
            ExprPtr c = elab_expr(e->args[0]);
            if (c->width != 1)
                fail("WIDTH_MISMATCH", "ternary condition must be 1 bit wide", e->line, e->col);
            ExprPtr t = elab_expr(e->args[1]);
            ExprPtr f = elab_expr(e->args[2]);
            int w = std::max(t->width, f->width);
            return e_mux(c, e_zext(t, w), e_zext(f, w));
        }
        case AstExpr::Kind::Concat: {
            std::vector<ExprPtr> parts;
            for (const auto &a : e->args) {
                if (a->kind == AstExpr::Kind::Number && a->width < 0)
                    fail("UNSIZED_IN_CONCAT", "concatenation operands must be sized", a->line,
                         a->col);
                parts.push_back(elab_expr(a));
            }
            return e_concat(std::move(parts));
        }
        }
        fail("BAD_EXPR", "unreachable");
    }

    // zero-extend rhs to the target width; wider rhs is a hard error
    ExprPtr fit(ExprPtr rhs, int width, const std::string &target, int line, int col) {
        if (rhs->width > width)
            fail("WIDTH_MISMATCH",
                 "assignment to '" + target + "' (" + std::to_string(width) +
                     " bits) from wider expression (" + std::to_string(rhs->width) + " bits)",
                 line, col);
        return e_zext(std::move(rhs), width);
    }

    // Lowers one clocked block into per-register next expressions with
    // last-assignment-wins semantics. guard == nullptr means always taken.
    void lower_stmt(const AstStmtPtr &s, ExprPtr guard, std::map<std::string, ExprPtr> &env,
                    std::vector<std::string> &order) {
        switch (s->kind) {
        case AstStmt::Kind::Block:
            for (const auto &c : s->stmts)
                lower_stmt(c, guard, env, order);
            return;
        case AstStmt::Kind::If: {
            ExprPtr c = elab_expr(s->cond);
            if (c->width != 1)
                fail("WIDTH_MISMATCH", "if condition must be 1 bit wide", s->line, s->col);
            ExprPtr then_guard = guard ? e_bin(Op::And, guard, c) : c;
            lower_stmt(s->then_stmt, then_guard, env, order);
            if (s->else_stmt) {
                ExprPtr nc = e_not(c);
                ExprPtr else_guard = guard ? e_bin(Op::And, guard, nc) : nc;
                lower_stmt(s->else_stmt, else_guard, env, order);
            }
            return;
        }
        case AstStmt::Kind::NonBlocking: {
            const Symbol &sym = lookup(s->target, s->line, s->col);
            if (!sym.is_reg())
                fail("NOT_A_REG",
                     "non-blocking assignment target '" + s->target + "' is not a reg",
                     s->line, s->col);
            ExprPtr rhs = fit(elab_expr(s->rhs), sym.width, s->target, s->line, s->col);
            if (!env.count(s->target)) {
                env[s->target] = e_var(s->target, sym.width);  // hold by default
                order.push_back(s->target);
            }
            env[s->target] = guard ? e_mux(guard, rhs, env[s->target]) : rhs;
            return;
        }
        }
    }

    // Splits `if (rst) <resets> else <body>` off the top of a block, if present.
    void extract_reset(const AstStmtPtr &body, AstStmtPtr &resets, AstStmtPtr &rest) {
        AstStmtPtr s = body;
        // allow one level of begin..end wrapping a single if
        if (s->kind == AstStmt::Kind::Block && s->stmts.size() == 1)
            s = s->stmts[0];
        if (s->kind == AstStmt::Kind::If && s->cond->kind == AstExpr::Kind::Ident &&
            s->cond->name == kResetName) {
            resets = s->then_stmt;
            rest = s->else_stmt;  // may be null: registers with reset-only logic
            return;
        }
        resets = nullptr;
        rest = body;
    }

    void collect_reset_values(const AstStmtPtr &s, std::map<std::string, uint64_t> &out) {
        if (!s)
            return;
        switch (s->kind) {
        case AstStmt::Kind::Block:
            for (const auto &c : s->stmts)
                collect_reset_values(c, out);
            return;
        case AstStmt::Kind::If:
            fail("BAD_RESET", "reset branch must contain only constant assignments", s->line,
                 s->col);
        case AstStmt::Kind::NonBlocking: {
            const Symbol &sym = lookup(s->target, s->line, s->col);
            if (!sym.is_reg())
                fail("NOT_A_REG", "'" + s->target + "' is not a reg", s->line, s->col);
            if (s->rhs->kind != AstExpr::Kind::Number)
                fail("BAD_RESET",
                     "reset value for '" + s->target + "' must be a literal constant",
                     s->line, s->col);
            uint64_t v = s->rhs->value;
            if ((v & ~width_mask(sym.width)) != 0)
                fail("WIDTH_MISMATCH", "reset value for '" + s->target + "' does not fit",
                     s->line, s->col);
            out[s->target] = v;
            return;
        }
        }
    }

    Design build() {
        build_symbols();
        Design d;
        d.name = m.name;
        for (const auto &port : m.ports)
            d.ports.push_back({port.name, port.is_input, port.width});

        // continuous assignments: each wire exactly once
        std::map<std::string, ExprPtr> wire_defs;
        for (const auto &a : m.assigns) {
            const Symbol &sym = lookup(a.target, a.line, a.col);
            if (!sym.is_wire())
                fail("NOT_A_WIRE", "assign target '" + a.target + "' is not a wire", a.line,
                     a.col);
            if (wire_defs.count(a.target))
                fail("MULTIPLE_DRIVERS", "wire '" + a.target + "' assigned more than once",
                     a.line, a.col);
            wire_defs[a.target] = fit(elab_expr(a.rhs), sym.width, a.target, a.line, a.col);
        }
        for (const auto &w : decl_order_wires) {
            if (!wire_defs.count(w))
                fail("NO_DRIVER", "wire '" + w + "' is never assigned");
            d.nets.push_back({w, symbols[w].width, wire_defs[w]});
        }

        // clocked blocks
        std::map<std::string, ExprPtr> next;
        std::map<std::string, uint64_t> reset_values;
        std::map<std::string, int> owner_block;
        for (size_t bi = 0; bi < m.always_blocks.size(); bi++) {
            const auto &blk = m.always_blocks[bi];
            AstStmtPtr resets, rest;
            extract_reset(blk.body, resets, rest);
            if (stmt_mentions(rest, kResetName))
                fail("RST_IN_EXPR",
                     "reset may only be tested by a top-level 'if (rst)' in a clocked block",
                     blk.line, blk.col);
            if (stmt_mentions(blk.body, kClockName))
                fail("CLOCK_IN_EXPR", "'clk' may not be read inside a clocked block", blk.line,
                     blk.col);
            collect_reset_values(resets, reset_values);
            std::map<std::string, ExprPtr> env;
            std::vector<std::string> order;
            if (rest)
                lower_stmt(rest, nullptr, env, order);
            for (const auto &r : order) {
                if (owner_block.count(r) && owner_block[r] != (int)bi)
                    fail("MULTIPLE_DRIVERS",
                         "register '" + r + "' assigned in more than one clocked block");
                owner_block[r] = (int)bi;
                next[r] = env[r];
            }
            // registers only mentioned in the reset branch also belong here
            for (const auto &[r, v] : reset_values) {
                (void)v;
                if (!owner_block.count(r))
                    owner_block[r] = (int)bi;
            }
        }
        for (const auto &r : decl_order_regs) {
            RegDef def;
            def.name = r;
            def.width = symbols[r].width;
            auto rv = reset_values.find(r);
            def.reset_value = rv == reset_values.end() ? 0 : rv->second;
            d.regs.push_back(def);
            auto nx = next.find(r);
            d.next[r] = nx == next.end() ? e_var(r, def.width) : nx->second;
        }

        // pragmas -> annotations
        if (p.done.empty())
            fail("MISSING_DONE", "no `// @done <port>` pragma");
        if (p.start.empty())
            fail("MISSING_START", "no `// @start <port>` pragma");
        auto check_port = [&](const std::string &n, bool want_input, const std::string &what) {
            auto it = symbols.find(n);
            if (it == symbols.end())
                fail("UNDECLARED", what + " pragma names unknown port '" + n + "'");
            bool is_input = it->second.kind == Symbol::Kind::Input;
            bool is_output = it->second.kind == Symbol::Kind::OutputWire ||
                             it->second.kind == Symbol::Kind::OutputReg;
            if (want_input && !is_input)
                fail("BAD_PRAGMA", what + " pragma '" + n + "' must name an input port");
            if (!want_input && !is_output)
                fail("BAD_PRAGMA", what + " pragma '" + n + "' must name an output port");
        };
        for (const auto &s : p.secret) {
            check_port(s, true, "@secret");
            d.annot.secret.insert(s);
        }
        for (const auto &o : p.observable) {
            check_port(o, false, "@observable");
            d.annot.observable.insert(o);
        }
        check_port(p.start, true, "@start");
        check_port(p.done, false, "@done");
        d.annot.start = p.start;
        d.annot.done = p.done;
        d.annot.observable.insert(p.done);  // done is observable by definition

        if (p.compensator) {
            CompensatorMeta meta;
            meta.internal_done = p.compensator->first;
            meta.t_max = p.compensator->second;
            d.compensator = meta;
        }

        auto diags = validate_design(d);
        if (!diags.empty())
            throw ElabError(diags[0].code, "elaborated design is not well-formed:\n" +
                                               format_diagnostics(diags));
        return d;
    }
};

} // namespace

Design elaborate(const SourceModule &m, const PragmaSet &p) {
    Elab e{m, p};
    return e.build();
}

} // namespace pascal
