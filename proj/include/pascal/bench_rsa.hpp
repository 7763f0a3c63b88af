#pragma once

#include <cstdint>
#include <string>

namespace pascal {

// Square-and-multiply exponentiation schedule: every key bit costs
// cycles_square, a set bit costs cycles_multiply more. The datapath is a
// cycle-faithful placeholder (a reversible mixing of ct and key), not real
// modular arithmetic; the timing channel lives entirely in the control FSM.
struct RsaParams {
    int n = 8;               // key width, 4..32
    int cycles_square = 1;
    int cycles_multiply = 1;
    int setup_cycles = 1;    // the start-pulse cycle preceding the first work cycle
};

std::string rsa_module_name(const RsaParams &p);

// mini-HDL source for the benchmark; parses and elaborates cleanly.
std::string generate(const RsaParams &p);

// Closed-form completion latency: n*cycles_square + popcount(key)*cycles_multiply.
// Throws ZeroKey (the design never completes on a zero key).
int expected_latency(const RsaParams &p, uint64_t key);

// A comfortable enumeration bound for this instance.
int suggested_bound(const RsaParams &p);

} // namespace pascal
