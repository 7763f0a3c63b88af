#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pascal/ir.hpp"

namespace pascal {

// AST for the mini-HDL subset. Width checking happens at elaboration; the
// AST mirrors the source with positions kept for diagnostics.

struct AstExpr;
using AstExprPtr = std::shared_ptr<AstExpr>;

struct AstExpr {
    enum class Kind { Number, Ident, Index, Unary, Binary, Ternary, Concat } kind;
    int line = 0, col = 0;
    uint64_t value = 0;   // Number
    int width = -1;       // Number: -1 when unsized
    std::string name;     // Ident / Index
    int hi = 0, lo = 0;   // Index
    char unary_op = 0;    // '~' or '-'
    std::string bin_op;   // "+","-","*","&","|","^","==","!=","<","<<",">>"
    std::vector<AstExprPtr> args;
};

struct AstStmt;
using AstStmtPtr = std::shared_ptr<AstStmt>;

struct AstStmt {
    enum class Kind { Block, If, NonBlocking } kind;
    int line = 0, col = 0;
    std::vector<AstStmtPtr> stmts;  // Block
    AstExprPtr cond;                // If
    AstStmtPtr then_stmt, else_stmt;
    std::string target;             // NonBlocking
    AstExprPtr rhs;
};

struct AstPort {
    bool is_input = true;
    bool is_reg = false;
    int width = 1;
    std::string name;
    int line = 0, col = 0;
};

struct AstDecl {  // wire / reg item
    bool is_reg = false;
    int width = 1;
    std::string name;
    int line = 0, col = 0;
};

struct AstAssign {
    std::string target;
    AstExprPtr rhs;
    int line = 0, col = 0;
};

struct AstAlways {
    AstStmtPtr body;
    int line = 0, col = 0;
};

// Security pragmas carried in `// @...` comments.
struct PragmaSet {
    std::vector<std::string> secret;
    std::vector<std::string> observable;
    std::string start;
    std::string done;
    std::optional<int> bound;                       // // @bound N
    std::optional<std::pair<std::string, int>> compensator;  // // @compensator sig tmax
};

struct SourceModule {
    std::string name;
    std::vector<AstPort> ports;
    std::vector<AstDecl> decls;
    std::vector<AstAssign> assigns;
    std::vector<AstAlways> always_blocks;
    PragmaSet pragmas;
};

// Text -> AST. Throws LexError / SyntaxError with 1-based positions.
SourceModule parse(const std::string &text);

// AST + pragmas -> validated Design. Throws ElabError.
Design elaborate(const SourceModule &m, const PragmaSet &p);
inline Design elaborate(const SourceModule &m) { return elaborate(m, m.pragmas); }

// Design -> mini-HDL text; parse+elaborate of the result simulates
// cycle-for-cycle identically to d.
std::string emit(const Design &d);

// parse + elaborate, using the file's own pragmas.
Design load_design_text(const std::string &text);
Design load_design_file(const std::string &path);

} // namespace pascal
