#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pascal {

// Validation result entry. Analyses return these as values; hard API misuse
// (malformed expressions, unknown signals) throws instead.
struct Diagnostic {
    std::string code;    // e.g. "COMB_LOOP", "SECRET_NOT_INPUT"
    std::string name;    // offending signal/port name, may be empty
    std::string message;
};

std::string format_diagnostics(const std::vector<Diagnostic> &diags);

struct IrError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownSignal : IrError {
    explicit UnknownSignal(const std::string &name)
        : IrError("unknown signal: " + name), signal(name) {}
    std::string signal;
};

struct CombinationalLoop : IrError {
    explicit CombinationalLoop(const std::string &name)
        : IrError("combinational loop through net: " + name), signal(name) {}
    std::string signal;
};

// Frontend errors carry source position (1-based line/column, 0 = unknown).
struct SourceError : std::runtime_error {
    SourceError(const std::string &kind, const std::string &msg, int line, int col)
        : std::runtime_error(kind + " at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line;
    int col;
};

struct LexError : SourceError {
    LexError(const std::string &msg, int line, int col)
        : SourceError("lex error", msg, line, col) {}
};

struct SyntaxError : SourceError {
    SyntaxError(const std::string &msg, int line, int col)
        : SourceError("syntax error", msg, line, col) {}
};

struct ElabError : std::runtime_error {
    ElabError(const std::string &code, const std::string &msg)
        : std::runtime_error(code + ": " + msg), code(code) {}
    std::string code;
};

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StimulusWidthMismatch : SimError {
    using SimError::SimError;
};

struct SignatureMismatch : SimError {
    using SimError::SimError;
};

struct DomainTooLarge : SimError {
    using SimError::SimError;
};

struct BoundTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PortCollision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotExhaustive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyReport : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroKey : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pascal
