#include "pascal/blast.hpp"

#include <algorithm>

namespace pascal {

namespace {
enum GateTag : uint32_t { TagAnd = 1, TagXor = 2, TagIte = 3, TagMaj = 4 };
}

Lit GateBuilder::b_and(Lit a, Lit b) {
    if (a == kFalse || b == kFalse)
        return kFalse;
    if (a == kTrue)
        return b;
    if (b == kTrue)
        return a;
    if (a == b)
        return a;
    if (a == lit_not(b))
        return kFalse;
    if (a > b)
        std::swap(a, b);
    GateKey key{TagAnd, (uint32_t)a, (uint32_t)b, 0};
    auto it = cache_.find(key);
    if (it != cache_.end())
        return it->second;
    Lit o = fresh();
    cnf_->add_clause({lit_not(o), a});
    cnf_->add_clause({lit_not(o), b});
    cnf_->add_clause({o, lit_not(a), lit_not(b)});
    cache_[key] = o;
    return o;
}

Lit GateBuilder::b_or(Lit a, Lit b) { return lit_not(b_and(lit_not(a), lit_not(b))); }

Lit GateBuilder::b_xor(Lit a, Lit b) {
    if (a == kFalse)
        return b;
    if (b == kFalse)
        return a;
    if (a == kTrue)
        return lit_not(b);
    if (b == kTrue)
        return lit_not(a);
    if (a == b)
        return kFalse;
    if (a == lit_not(b))
        return kTrue;
    // canonicalize polarity: xor(a,b) == ~xor(~a,b) == ~xor(a,~b)
    bool flip = false;
    if (lit_sign(a)) {
        a = lit_not(a);
        flip = !flip;
    }
    if (lit_sign(b)) {
        b = lit_not(b);
        flip = !flip;
    }
    if (a > b)
        std::swap(a, b);
    GateKey key{TagXor, (uint32_t)a, (uint32_t)b, 0};
    Lit o;
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        o = it->second;
    } else {
        o = fresh();
        cnf_->add_clause({lit_not(o), a, b});
        cnf_->add_clause({lit_not(o), lit_not(a), lit_not(b)});
        cnf_->add_clause({o, lit_not(a), b});
        cnf_->add_clause({o, a, lit_not(b)});
        cache_[key] = o;
    }
    return flip ? lit_not(o) : o;
}

Lit GateBuilder::b_ite(Lit c, Lit t, Lit f) {
    if (c == kTrue)
        return t;
    if (c == kFalse)
        return f;
    if (t == f)
        return t;
    if (t == kTrue)
        return b_or(c, f);
    if (t == kFalse)
        return b_and(lit_not(c), f);
    if (f == kTrue)
        return b_or(lit_not(c), t);
    if (f == kFalse)
        return b_and(c, t);
    if (t == lit_not(f))
        return b_xor(c, f);
    GateKey key{TagIte, (uint32_t)c, (uint32_t)t, (uint32_t)f};
    auto it = cache_.find(key);
    if (it != cache_.end())
        return it->second;
    Lit o = fresh();
    cnf_->add_clause({lit_not(o), lit_not(c), t});
    cnf_->add_clause({lit_not(o), c, f});
    cnf_->add_clause({o, lit_not(c), lit_not(t)});
    cnf_->add_clause({o, c, lit_not(f)});
    cnf_->add_clause({lit_not(o), t, f});
    cnf_->add_clause({o, lit_not(t), lit_not(f)});
    cache_[key] = o;
    return o;
}

Lit GateBuilder::b_maj(Lit a, Lit b, Lit c) {
    if (a == kTrue)
        return b_or(b, c);
    if (a == kFalse)
        return b_and(b, c);
    if (b == kTrue)
        return b_or(a, c);
    if (b == kFalse)
        return b_and(a, c);
    if (c == kTrue)
        return b_or(a, b);
    if (c == kFalse)
        return b_and(a, b);
    if (a == b)
        return a;
    if (a == c)
        return a;
    if (b == c)
        return b;
    if (a == lit_not(b))
        return c;
    if (a == lit_not(c))
        return b;
    if (b == lit_not(c))
        return a;
    Lit sorted[3] = {a, b, c};
    std::sort(sorted, sorted + 3);
    a = sorted[0];
    b = sorted[1];
    c = sorted[2];
    GateKey key{TagMaj, (uint32_t)a, (uint32_t)b, (uint32_t)c};
    auto it = cache_.find(key);
    if (it != cache_.end())
        return it->second;
    Lit o = fresh();
    cnf_->add_clause({lit_not(o), a, b});
    cnf_->add_clause({lit_not(o), a, c});
    cnf_->add_clause({lit_not(o), b, c});
    cnf_->add_clause({o, lit_not(a), lit_not(b)});
    cnf_->add_clause({o, lit_not(a), lit_not(c)});
    cnf_->add_clause({o, lit_not(b), lit_not(c)});
    cache_[key] = o;
    return o;
}

Lit GateBuilder::b_and_many(const std::vector<Lit> &ls) {
    // balanced reduction keeps gate depth low
    std::vector<Lit> cur = ls;
    if (cur.empty())
        return kTrue;
    while (cur.size() > 1) {
        std::vector<Lit> next;
        for (size_t i = 0; i + 1 < cur.size(); i += 2)
            next.push_back(b_and(cur[i], cur[i + 1]));
        if (cur.size() & 1)
            next.push_back(cur.back());
        cur = std::move(next);
    }
    return cur[0];
}

Lit GateBuilder::b_or_many(const std::vector<Lit> &ls) {
    std::vector<Lit> neg;
    neg.reserve(ls.size());
    for (Lit l : ls)
        neg.push_back(lit_not(l));
    return lit_not(b_and_many(neg));
}

Word GateBuilder::w_const(int width, uint64_t value) {
    Word w(width);
    for (int i = 0; i < width; i++)
        w[i] = (value >> i) & 1 ? kTrue : kFalse;
    return w;
}

Word GateBuilder::w_not(const Word &a) {
    Word o(a.size());
    for (size_t i = 0; i < a.size(); i++)
        o[i] = lit_not(a[i]);
    return o;
}

Word GateBuilder::w_and(const Word &a, const Word &b) {
    Word o(a.size());
    for (size_t i = 0; i < a.size(); i++)
        o[i] = b_and(a[i], b[i]);
    return o;
}

Word GateBuilder::w_or(const Word &a, const Word &b) {
    Word o(a.size());
    for (size_t i = 0; i < a.size(); i++)
        o[i] = b_or(a[i], b[i]);
    return o;
}

Word GateBuilder::w_xor(const Word &a, const Word &b) {
    Word o(a.size());
    for (size_t i = 0; i < a.size(); i++)
        o[i] = b_xor(a[i], b[i]);
    return o;
}

Word GateBuilder::w_add(const Word &a, const Word &b) {
    Word o(a.size());
    Lit carry = kFalse;
    for (size_t i = 0; i < a.size(); i++) {
        Lit s = b_xor(a[i], b[i]);
        o[i] = b_xor(s, carry);
        carry = b_maj(a[i], b[i], carry);
    }
    return o;
}

Word GateBuilder::w_sub(const Word &a, const Word &b) {
    // a + ~b + 1
    Word o(a.size());
    Lit carry = kTrue;
    for (size_t i = 0; i < a.size(); i++) {
        Lit nb = lit_not(b[i]);
        Lit s = b_xor(a[i], nb);
        o[i] = b_xor(s, carry);
        carry = b_maj(a[i], nb, carry);
    }
    return o;
}

Word GateBuilder::w_mul(const Word &a, const Word &b) {
    int w = (int)a.size();
    Word acc = w_const(w, 0);
    for (int i = 0; i < w; i++) {
        if (b[i] == kFalse)
            continue;
        // partial product of a << i, gated by b[i]
        Word pp(w, kFalse);
        for (int j = 0; i + j < w; j++)
            pp[i + j] = b_and(a[j], b[i]);
        acc = w_add(acc, pp);
    }
    return acc;
}

Lit GateBuilder::w_eq(const Word &a, const Word &b) {
    std::vector<Lit> bits;
    bits.reserve(a.size());
    for (size_t i = 0; i < a.size(); i++)
        bits.push_back(lit_not(b_xor(a[i], b[i])));
    return b_and_many(bits);
}

Lit GateBuilder::w_lt(const Word &a, const Word &b) {
    // unsigned borrow chain: borrow_out of a - b
    Lit borrow = kFalse;
    for (size_t i = 0; i < a.size(); i++)
        borrow = b_maj(lit_not(a[i]), b[i], borrow);
    return borrow;
}

namespace {
int shift_stages(int width) {
    int s = 0;
    while ((1 << s) < width)
        s++;
    return s;
}
} // namespace

// Barrel shifter. The mux stages cover amounts 0..2^stages-1 and already
// yield zero for amounts in [w, 2^stages); amount bits at or above the stage
// count force zero explicitly.
Word GateBuilder::w_shl(const Word &a, const Word &amount) {
    int w = (int)a.size();
    int stages = shift_stages(w);
    Word cur = a;
    for (int s = 0; s < stages && s < (int)amount.size(); s++) {
        Word shifted(w, kFalse);
        for (int i = (1 << s); i < w; i++)
            shifted[i] = cur[i - (1 << s)];
        cur = w_mux(amount[s], shifted, cur);
    }
    std::vector<Lit> high;
    for (int s = stages; s < (int)amount.size(); s++)
        high.push_back(amount[s]);
    Lit zero = b_or_many(high);
    Word out(w);
    for (int i = 0; i < w; i++)
        out[i] = b_and(lit_not(zero), cur[i]);
    return out;
}

Word GateBuilder::w_shr(const Word &a, const Word &amount) {
    int w = (int)a.size();
    int stages = shift_stages(w);
    Word cur = a;
    for (int s = 0; s < stages && s < (int)amount.size(); s++) {
        Word shifted(w, kFalse);
        for (int i = 0; i + (1 << s) < w; i++)
            shifted[i] = cur[i + (1 << s)];
        cur = w_mux(amount[s], shifted, cur);
    }
    std::vector<Lit> high;
    for (int s = stages; s < (int)amount.size(); s++)
        high.push_back(amount[s]);
    Lit zero = b_or_many(high);
    Word out(w);
    for (int i = 0; i < w; i++)
        out[i] = b_and(lit_not(zero), cur[i]);
    return out;
}

Word GateBuilder::w_mux(Lit c, const Word &t, const Word &f) {
    Word o(t.size());
    for (size_t i = 0; i < t.size(); i++)
        o[i] = b_ite(c, t[i], f[i]);
    return o;
}

Word GateBuilder::w_slice(const Word &a, int hi, int lo) {
    return Word(a.begin() + lo, a.begin() + hi + 1);
}

Word GateBuilder::w_zext(const Word &a, int width) {
    Word o = a;
    o.resize(width, kFalse);
    return o;
}

Word GateBuilder::blast(const ExprPtr &e, const std::map<std::string, Word> &env) {
    switch (e->op) {
    case Op::Const:
        return w_const(e->width, e->value);
    case Op::Var: {
        auto it = env.find(e->name);
        if (it == env.end())
            throw IrError("blast: no binding for '" + e->name + "'");
        return it->second;
    }
    case Op::Not:
        return w_not(blast(e->args[0], env));
    case Op::And:
        return w_and(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Or:
        return w_or(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Xor:
        return w_xor(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Add:
        return w_add(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Sub:
        return w_sub(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Mul:
        return w_mul(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Eq:
        return {w_eq(blast(e->args[0], env), blast(e->args[1], env))};
    case Op::Neq:
        return {lit_not(w_eq(blast(e->args[0], env), blast(e->args[1], env)))};
    case Op::Lt:
        return {w_lt(blast(e->args[0], env), blast(e->args[1], env))};
    case Op::Shl:
        return w_shl(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Shr:
        return w_shr(blast(e->args[0], env), blast(e->args[1], env));
    case Op::Mux: {
        Word c = blast(e->args[0], env);
        return w_mux(c[0], blast(e->args[1], env), blast(e->args[2], env));
    }
    case Op::Slice:
        return w_slice(blast(e->args[0], env), e->hi, e->lo);
    case Op::Concat: {
        // first arg is most significant
        Word out;
        for (auto it = e->args.rbegin(); it != e->args.rend(); ++it) {
            Word part = blast(*it, env);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    case Op::Zext:
        return w_zext(blast(e->args[0], env), e->width);
    }
    throw IrError("blast: unexpected operator");
}

uint64_t decode_word(const Word &w, const std::vector<uint8_t> &model) {
    uint64_t v = 0;
    for (size_t i = 0; i < w.size(); i++) {
        bool bit;
        if (is_const_lit(w[i]))
            bit = w[i] == kTrue;
        else
            bit = model[lit_var(w[i])] != (uint8_t)lit_sign(w[i]);
        if (bit)
            v |= uint64_t(1) << i;
    }
    return v;
}

} // namespace pascal
