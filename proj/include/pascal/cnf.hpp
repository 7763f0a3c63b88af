#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pascal/diag.hpp"

namespace pascal {

// MiniSat-style literal encoding: lit = 2*var + sign (sign set = negated).
// Variable 0 is pinned to true by a unit clause, so lit 0 is the constant
// TRUE and lit 1 the constant FALSE.
using Lit = int32_t;

inline Lit mk_lit(int var, bool neg = false) { return (Lit)(var * 2 + (neg ? 1 : 0)); }
inline int lit_var(Lit l) { return l >> 1; }
inline bool lit_sign(Lit l) { return l & 1; }
inline Lit lit_not(Lit l) { return l ^ 1; }

inline constexpr Lit kTrue = 0;
inline constexpr Lit kFalse = 1;

inline bool is_const_lit(Lit l) { return lit_var(l) == 0; }

struct Cnf {
    int num_vars = 1;  // var 0 == constant true
    std::vector<std::vector<Lit>> clauses;
    size_t clause_budget = 50'000'000;

    Cnf() { clauses.push_back({kTrue}); }

    int new_var() { return num_vars++; }

    void add_clause(std::vector<Lit> lits) {
        if (clauses.size() >= clause_budget)
            throw CapacityExceeded("clause budget of " + std::to_string(clause_budget) +
                                   " exceeded");
        clauses.push_back(std::move(lits));
    }

    size_t literal_count() const {
        size_t n = 0;
        for (const auto &c : clauses)
            n += c.size();
        return n;
    }
};

// DIMACS uses 1-based variables; our var v maps to DIMACS v+1.
void write_dimacs(const Cnf &cnf, std::ostream &out);
std::string to_dimacs(const Cnf &cnf);
Cnf read_dimacs(std::istream &in);

} // namespace pascal
