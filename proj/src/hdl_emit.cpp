#include <sstream>

#include "pascal/hdl.hpp"

namespace pascal {

namespace {

std::string hex_const(int width, uint64_t value) {
    std::ostringstream out;
    out << width << "'h" << std::hex << value;
    return out.str();
}

struct Emitter {
    const Design &d;
    std::ostringstream out = {};
    // slices over non-identifier expressions need a named temporary
    std::vector<NetDef> hoisted = {};
    int tmp_counter = 0;

    std::string fresh_tmp() {
        for (;;) {
            std::string name = "t_slice" + std::to_string(tmp_counter++);
            if (!d.is_declared(name))
                return name;
        }
    }

    ExprPtr hoist_slices(const ExprPtr &e) {
        if (e->op == Op::Slice && e->args[0]->op != Op::Var) {
            ExprPtr base = hoist_slices(e->args[0]);
            std::string name = fresh_tmp();
            hoisted.push_back({name, base->width, base});
            return e_slice(e_var(name, base->width), e->hi, e->lo);
        }
        bool changed = false;
        std::vector<ExprPtr> args;
        for (const auto &a : e->args) {
            ExprPtr h = hoist_slices(a);
            changed |= (h != a);
            args.push_back(std::move(h));
        }
        if (!changed)
            return e;
        auto copy = std::make_shared<Expr>(*e);
        copy->args = std::move(args);
        return copy;
    }

    std::string expr_text(const ExprPtr &e) {
        switch (e->op) {
        case Op::Const:
            return hex_const(e->width, e->value);
        case Op::Var:
            return e->name;
        case Op::Not:
            return "(~" + expr_text(e->args[0]) + ")";
        case Op::And:
            return "(" + expr_text(e->args[0]) + " & " + expr_text(e->args[1]) + ")";
        case Op::Or:
            return "(" + expr_text(e->args[0]) + " | " + expr_text(e->args[1]) + ")";
        case Op::Xor:
            return "(" + expr_text(e->args[0]) + " ^ " + expr_text(e->args[1]) + ")";
        case Op::Add:
            return "(" + expr_text(e->args[0]) + " + " + expr_text(e->args[1]) + ")";
        case Op::Sub:
            return "(" + expr_text(e->args[0]) + " - " + expr_text(e->args[1]) + ")";
        case Op::Mul:
            return "(" + expr_text(e->args[0]) + " * " + expr_text(e->args[1]) + ")";
        case Op::Eq:
            return "(" + expr_text(e->args[0]) + " == " + expr_text(e->args[1]) + ")";
        case Op::Neq:
            return "(" + expr_text(e->args[0]) + " != " + expr_text(e->args[1]) + ")";
        case Op::Lt:
            return "(" + expr_text(e->args[0]) + " < " + expr_text(e->args[1]) + ")";
        case Op::Shl:
            return "(" + expr_text(e->args[0]) + " << " + expr_text(e->args[1]) + ")";
        case Op::Shr:
            return "(" + expr_text(e->args[0]) + " >> " + expr_text(e->args[1]) + ")";
        case Op::Mux:
            return "(" + expr_text(e->args[0]) + " ? " + expr_text(e->args[1]) + " : " +
                   expr_text(e->args[2]) + ")";
        case Op::Slice:
            return e->args[0]->name + "[" + std::to_string(e->hi) + ":" +
                   std::to_string(e->lo) + "]";
        case Op::Concat: {
            std::string s = "{";
            for (size_t i = 0; i < e->args.size(); i++) {
                if (i)
                    s += ", ";
                s += expr_text(e->args[i]);
            }
            return s + "}";
        }
        case Op::Zext: {
            int pad = e->width - e->args[0]->width;
            return "{" + hex_const(pad, 0) + ", " + expr_text(e->args[0]) + "}";
        }
        }
        throw IrError("emit: unexpected operator");
    }

    static std::string range_text(int width) {
        return width == 1 ? "" : "[" + std::to_string(width - 1) + ":0] ";
    }

    std::string run() {
        require_valid(d);
        const auto &an = d.annot;
        if (!an.secret.empty()) {
            out << "// @secret";
            for (const auto &s : an.secret)
                out << " " << s;
            out << "\n";
        }
        out << "// @observable";
        for (const auto &o : an.observable)
            out << " " << o;
        out << "\n";
        out << "// @start " << an.start << "\n";
        out << "// @done " << an.done << "\n";
        if (d.compensator)
            out << "// @compensator " << d.compensator->internal_done << " "
                << d.compensator->t_max << "\n";

        out << "module " << d.name << "(";
        for (size_t i = 0; i < d.ports.size(); i++) {
            const Port &p = d.ports[i];
            if (i)
                out << ", ";
            out << (p.is_input ? "input " : "output ");
            if (!p.is_input && d.find_reg(p.name))
                out << "reg ";
            out << range_text(p.width) << p.name;
        }
        out << ");\n";

        for (const auto &r : d.regs)
            if (!d.find_port(r.name))
                out << "  reg " << range_text(r.width) << r.name << ";\n";

        // hoist non-identifier slice bases into temporaries first, so the
        // assigns below stay inside the grammar
        std::vector<std::pair<std::string, ExprPtr>> net_rhs;
        for (const auto &w : d.nets)
            net_rhs.push_back({w.name, hoist_slices(w.expr)});
        std::vector<std::pair<std::string, ExprPtr>> reg_rhs;
        for (const auto &r : d.regs)
            reg_rhs.push_back({r.name, hoist_slices(d.next.at(r.name))});

        for (const auto &w : d.nets)
            if (!d.find_port(w.name))
                out << "  wire " << range_text(w.width) << w.name << ";\n";
        for (const auto &h : hoisted)
            out << "  wire " << range_text(h.width) << h.name << ";\n";

        for (const auto &h : hoisted)
            out << "  assign " << h.name << " = " << expr_text(h.expr) << ";\n";
        for (const auto &[name, rhs] : net_rhs)
            out << "  assign " << name << " = " << expr_text(rhs) << ";\n";

        if (!d.regs.empty()) {
            out << "  always @(posedge clk) begin\n";
            out << "    if (rst) begin\n";
            for (const auto &r : d.regs)
                out << "      " << r.name << " <= " << hex_const(r.width, r.reset_value)
                    << ";\n";
            out << "    end else begin\n";
            for (const auto &[name, rhs] : reg_rhs)
                out << "      " << name << " <= " << expr_text(rhs) << ";\n";
            out << "    end\n";
            out << "  end\n";
        }
        out << "endmodule\n";
        return out.str();
    }
};

} // namespace

std::string emit(const Design &d) {
    Emitter e{d};
    return e.run();
}

} // namespace pascal
