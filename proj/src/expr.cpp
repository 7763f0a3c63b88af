#include "pascal/expr.hpp"

#include <algorithm>

namespace pascal {

const char *op_name(Op op) {
    switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Xor: return "xor";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Eq: return "eq";
    case Op::Neq: return "neq";
    case Op::Lt: return "lt";
    case Op::Shl: return "shl";
    case Op::Shr: return "shr";
    case Op::Mux: return "mux";
    case Op::Slice: return "slice";
    case Op::Concat: return "concat";
    case Op::Zext: return "zext";
    }
    return "?";
}

static void check_width(int width) {
    if (width < 1 || width > kMaxWidth)
        throw IrError("width out of range 1..64: " + std::to_string(width));
}

ExprPtr e_const(int width, uint64_t value) {
    check_width(width);
    if ((value & ~width_mask(width)) != 0)
        throw IrError("constant " + std::to_string(value) + " does not fit in " +
                      std::to_string(width) + " bits");
    auto e = std::make_shared<Expr>();
    e->op = Op::Const;
    e->width = width;
    e->value = value;
    return e;
}

ExprPtr e_var(std::string name, int width) {
    check_width(width);
    if (name.empty())
        throw IrError("variable with empty name");
    auto e = std::make_shared<Expr>();
    e->op = Op::Var;
    e->width = width;
    e->name = std::move(name);
    return e;
}

ExprPtr e_not(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Not;
    e->width = a->width;
    e->args = {std::move(a)};
    return e;
}

ExprPtr e_bin(Op op, ExprPtr a, ExprPtr b) {
    switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Xor:
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
        break;
    default:
        throw IrError(std::string("e_bin: not a binary word operator: ") + op_name(op));
    }
    if (a->width != b->width)
        throw IrError(std::string(op_name(op)) + ": operand widths differ (" +
                      std::to_string(a->width) + " vs " + std::to_string(b->width) + ")");
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->width = a->width;
    e->args = {std::move(a), std::move(b)};
    return e;
}

ExprPtr e_cmp(Op op, ExprPtr a, ExprPtr b) {
    if (op != Op::Eq && op != Op::Neq && op != Op::Lt)
        throw IrError(std::string("e_cmp: not a comparison: ") + op_name(op));
    if (a->width != b->width)
        throw IrError(std::string(op_name(op)) + ": operand widths differ (" +
                      std::to_string(a->width) + " vs " + std::to_string(b->width) + ")");
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->width = 1;
    e->args = {std::move(a), std::move(b)};
    return e;
}

ExprPtr e_shift(Op op, ExprPtr a, ExprPtr amount) {
    if (op != Op::Shl && op != Op::Shr)
        throw IrError(std::string("e_shift: not a shift: ") + op_name(op));
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->width = a->width;
    e->args = {std::move(a), std::move(amount)};
    return e;
}

ExprPtr e_mux(ExprPtr cond, ExprPtr then_e, ExprPtr else_e) {
    if (cond->width != 1)
        throw IrError("mux condition must have width 1, got " + std::to_string(cond->width));
    if (then_e->width != else_e->width)
        throw IrError("mux branch widths differ (" + std::to_string(then_e->width) +
                      " vs " + std::to_string(else_e->width) + ")");
    auto e = std::make_shared<Expr>();
    e->op = Op::Mux;
    e->width = then_e->width;
    e->args = {std::move(cond), std::move(then_e), std::move(else_e)};
    return e;
}

ExprPtr e_slice(ExprPtr a, int hi, int lo) {
    if (lo < 0 || hi < lo || hi >= a->width)
        throw IrError("slice [" + std::to_string(hi) + ":" + std::to_string(lo) +
                      "] out of range for width " + std::to_string(a->width));
    auto e = std::make_shared<Expr>();
    e->op = Op::Slice;
    e->width = hi - lo + 1;
    e->hi = hi;
    e->lo = lo;
    e->args = {std::move(a)};
    return e;
}

ExprPtr e_concat(std::vector<ExprPtr> parts) {
    if (parts.empty())
        throw IrError("empty concatenation");
    int width = 0;
    for (const auto &p : parts)
        width += p->width;
    check_width(width);
    auto e = std::make_shared<Expr>();
    e->op = Op::Concat;
    e->width = width;
    e->args = std::move(parts);
    return e;
}

ExprPtr e_zext(ExprPtr a, int width) {
    check_width(width);
    if (width < a->width)
        throw IrError("zext to narrower width " + std::to_string(width) + " from " +
                      std::to_string(a->width));
    if (width == a->width)
        return a;
    auto e = std::make_shared<Expr>();
    e->op = Op::Zext;
    e->width = width;
    e->args = {std::move(a)};
    return e;
}

bool expr_equal(const Expr &a, const Expr &b) {
    if (&a == &b)
        return true;
    if (a.op != b.op || a.width != b.width)
        return false;
    switch (a.op) {
    case Op::Const:
        if (a.value != b.value) return false;
        break;
    case Op::Var:
        if (a.name != b.name) return false;
        break;
    case Op::Slice:
        if (a.hi != b.hi || a.lo != b.lo) return false;
        break;
    default:
        break;
    }
    if (a.args.size() != b.args.size())
        return false;
    for (size_t i = 0; i < a.args.size(); i++)
        if (!expr_equal(*a.args[i], *b.args[i]))
            return false;
    return true;
}

void expr_vars(const ExprPtr &e, std::vector<std::string> &out) {
    if (e->op == Op::Var) {
        out.push_back(e->name);
        return;
    }
    for (const auto &a : e->args)
        expr_vars(a, out);
}

ExprPtr expr_rename(const ExprPtr &e,
                    const std::vector<std::pair<std::string, std::string>> &renames) {
    if (e->op == Op::Var) {
        for (const auto &[from, to] : renames)
            if (e->name == from)
                return e_var(to, e->width);
        return e;
    }
    bool changed = false;
    std::vector<ExprPtr> args;
    args.reserve(e->args.size());
    for (const auto &a : e->args) {
        ExprPtr r = expr_rename(a, renames);
        changed |= (r != a);
        args.push_back(std::move(r));
    }
    if (!changed)
        return e;
    auto out = std::make_shared<Expr>(*e);
    out->args = std::move(args);
    return out;
}

std::string expr_to_string(const ExprPtr &e) {
    switch (e->op) {
    case Op::Const:
        return std::to_string(e->width) + "'d" + std::to_string(e->value);
    case Op::Var:
        return e->name + ":" + std::to_string(e->width);
    case Op::Slice:
        return std::string("(slice ") + expr_to_string(e->args[0]) + " " +
               std::to_string(e->hi) + " " + std::to_string(e->lo) + ")";
    default: {
        std::string s = std::string("(") + op_name(e->op);
        if (e->op == Op::Zext)
            s += " " + std::to_string(e->width);
        for (const auto &a : e->args)
            s += " " + expr_to_string(a);
        return s + ")";
    }
    }
}

std::string format_diagnostics(const std::vector<Diagnostic> &diags) {
    std::string out;
    for (const auto &d : diags) {
        out += d.code;
        if (!d.name.empty())
            out += " [" + d.name + "]";
        out += ": " + d.message + "\n";
    }
    return out;
}

} // namespace pascal
