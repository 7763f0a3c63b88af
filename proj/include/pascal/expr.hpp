#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pascal/diag.hpp"

namespace pascal {

// Signal widths are 1..64 bits; values are uint64_t masked to the width.
inline constexpr int kMaxWidth = 64;

inline uint64_t width_mask(int width) {
    return width >= 64 ? ~uint64_t(0) : ((uint64_t(1) << width) - 1);
}

enum class Op {
    Const,
    Var,
    Not,
    And,
    Or,
    Xor,
    Add,
    Sub,
    Mul,
    Eq,
    Neq,
    Lt,
    Shl,
    Shr,
    Mux,
    Slice,
    Concat,
    Zext,
};

const char *op_name(Op op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node. Nodes are freely shared between designs; the
// factory functions below enforce the width rules at construction time.
struct Expr {
    Op op;
    int width;
    uint64_t value = 0;       // Const
    std::string name;         // Var
    int hi = 0, lo = 0;       // Slice
    std::vector<ExprPtr> args;
};

ExprPtr e_const(int width, uint64_t value);
ExprPtr e_var(std::string name, int width);
ExprPtr e_not(ExprPtr a);
// and/or/xor/add/sub/mul: equal operand widths, result keeps the width
ExprPtr e_bin(Op op, ExprPtr a, ExprPtr b);
// eq/neq/lt: equal operand widths, result width 1
ExprPtr e_cmp(Op op, ExprPtr a, ExprPtr b);
// shl/shr: result width = a's width; amount may have any width
ExprPtr e_shift(Op op, ExprPtr a, ExprPtr amount);
// cond width 1; branches equal width
ExprPtr e_mux(ExprPtr cond, ExprPtr then_e, ExprPtr else_e);
ExprPtr e_slice(ExprPtr a, int hi, int lo);
// first element is the most significant chunk, Verilog {a, b} order
ExprPtr e_concat(std::vector<ExprPtr> parts);
ExprPtr e_zext(ExprPtr a, int width);

// Structural equality (names, widths, constants, shapes).
bool expr_equal(const Expr &a, const Expr &b);
inline bool expr_equal(const ExprPtr &a, const ExprPtr &b) { return expr_equal(*a, *b); }

// Collects every Var name referenced by the expression into out.
void expr_vars(const ExprPtr &e, std::vector<std::string> &out);

// Returns a copy of e with Var nodes renamed through the map; unmapped names
// are kept. Shared subtrees without renamed vars are reused as-is.
ExprPtr expr_rename(const ExprPtr &e,
                    const std::vector<std::pair<std::string, std::string>> &renames);

// Deterministic textual form, used for structural diffing and debugging.
std::string expr_to_string(const ExprPtr &e);

} // namespace pascal
