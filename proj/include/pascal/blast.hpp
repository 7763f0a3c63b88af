#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pascal/cnf.hpp"
#include "pascal/expr.hpp"

namespace pascal {

// A word is a little-endian literal vector (bits[0] = LSB).
using Word = std::vector<Lit>;

// Tseitin gate builder with constant folding and structural hashing; shared
// subcircuits across time frames collapse to the same literals.
class GateBuilder {
public:
    explicit GateBuilder(Cnf &cnf) : cnf_(&cnf) {}

    Cnf &cnf() { return *cnf_; }

    Lit fresh() { return mk_lit(cnf_->new_var()); }

    Lit b_and(Lit a, Lit b);
    Lit b_or(Lit a, Lit b);
    Lit b_xor(Lit a, Lit b);
    Lit b_ite(Lit c, Lit t, Lit f);   // c ? t : f
    Lit b_maj(Lit a, Lit b, Lit c);   // carry of a full adder
    Lit b_and_many(const std::vector<Lit> &ls);
    Lit b_or_many(const std::vector<Lit> &ls);

    // word ops; operands must have the widths the IR factories guarantee
    Word w_const(int width, uint64_t value);
    Word w_not(const Word &a);
    Word w_and(const Word &a, const Word &b);
    Word w_or(const Word &a, const Word &b);
    Word w_xor(const Word &a, const Word &b);
    Word w_add(const Word &a, const Word &b);
    Word w_sub(const Word &a, const Word &b);
    Word w_mul(const Word &a, const Word &b);
    Lit w_eq(const Word &a, const Word &b);
    Lit w_lt(const Word &a, const Word &b);  // unsigned
    Word w_shl(const Word &a, const Word &amount);
    Word w_shr(const Word &a, const Word &amount);
    Word w_mux(Lit c, const Word &t, const Word &f);
    Word w_slice(const Word &a, int hi, int lo);
    Word w_zext(const Word &a, int width);

    // evaluates an expression over an environment of named words
    Word blast(const ExprPtr &e, const std::map<std::string, Word> &env);

private:
    struct GateKey {
        uint32_t tag, a, b, c;
        bool operator==(const GateKey &) const = default;
    };
    struct GateKeyHash {
        size_t operator()(const GateKey &k) const {
            uint64_t h = k.tag;
            h = h * 0x9e3779b97f4a7c15ULL + k.a;
            h = h * 0x9e3779b97f4a7c15ULL + k.b;
            h = h * 0x9e3779b97f4a7c15ULL + k.c;
            return (size_t)(h ^ (h >> 32));
        }
    };

    Cnf *cnf_;
    std::unordered_map<GateKey, Lit, GateKeyHash> cache_;
};

// Decodes a word under a model.
uint64_t decode_word(const Word &w, const std::vector<uint8_t> &model);

} // namespace pascal
