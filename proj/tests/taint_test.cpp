#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pascal/sim.hpp"
#include "pascal/taint.hpp"
#include "test_util.hpp"

using namespace pascal;

namespace {

Design wire_through() {
    // secret wired straight to the observable output
    Design d;
    d.name = "wire";
    d.ports = {{"clk", true, 1}, {"rst", true, 1},   {"start", true, 1},
               {"k", true, 1},   {"out", false, 1},  {"done", false, 1}};
    d.regs = {{"r", 1, 0}};
    d.next["r"] = e_const(1, 1);
    d.nets = {{"out", 1, e_var("k", 1)}, {"done", 1, e_var("r", 1)}};
    d.annot = {{"k"}, {"out", "done"}, "start", "done"};
    require_valid(d);
    return d;
}

} // namespace

TEST_CASE("propagate: secret wired to output taints the output") {
    Design d = wire_through();
    TaintState st = propagate(d);
    CHECK(st.is_tainted("k"));
    CHECK(st.is_tainted("out"));
    CHECK(!st.is_tainted("done"));
    CHECK(!st.is_tainted("r"));
}

TEST_CASE("propagate: secret into a never-read register stays contained") {
    Design d = wire_through();
    d.regs.push_back({"sink", 1, 0});
    d.next["sink"] = e_var("k", 1);
    d.nets[0] = {"out", 1, e_const(1, 0)};  // detach the direct wire
    require_valid(d);
    TaintState st = propagate(d);
    CHECK(st.is_tainted("sink"));
    CHECK(!st.is_tainted("out"));
    CHECK(!st.is_tainted("done"));
}

TEST_CASE("propagate: control dependence through a mux select") {
    Design d = wire_through();
    // out = k ? a-const : b-const; select is the only secret operand
    d.nets[0] = {"out", 1, e_mux(e_var("k", 1), e_const(1, 0), e_const(1, 1))};
    require_valid(d);
    TaintState st = propagate(d);
    CHECK(st.is_tainted("out"));
}

TEST_CASE("propagate: rsa8 taints both done and pt") {
    Design d = testutil::rsa_design(8);
    TaintState st = propagate(d);
    CHECK(st.is_tainted("done"));
    CHECK(st.is_tainted("pt"));
    CHECK(st.is_tainted("ksh"));
    CHECK(!st.is_tainted("ct"));
    // fixpoint bound: at most one pass per signal
    CHECK(st.iterations <= (int)st.tainted.size());
}

TEST_CASE("has_security_path: corpus verdicts") {
    CHECK(has_security_path(testutil::load_corpus("const5.mhdl")).verdict ==
          PathVerdict::NoPath);
    CHECK(has_security_path(testutil::load_corpus("secretdbg.mhdl")).verdict ==
          PathVerdict::NoPath);
    CHECK(has_security_path(testutil::load_corpus("xorpipe.mhdl")).verdict ==
          PathVerdict::PathExists);
    CHECK(has_security_path(testutil::load_corpus("neverdone.mhdl")).verdict ==
          PathVerdict::PathExists);
    CHECK(has_security_path(testutil::load_corpus("pubvar.mhdl")).verdict ==
          PathVerdict::PathExists);
}

TEST_CASE("has_security_path: rsa8 witness cone holds the schedule signals") {
    Design d = testutil::rsa_design(8);
    SecurityPathResult r = has_security_path(d);
    REQUIRE(r.verdict == PathVerdict::PathExists);
    REQUIRE(r.witness_cones.count("done"));
    const auto &cone = r.witness_cones.at("done");
    CHECK(cone.count("key"));
    CHECK(cone.count("ksh"));
    CHECK(cone.count("state"));
}

TEST_CASE("monotonicity: adding an operand never flips PATH_EXISTS to NO_PATH") {
    Design d = testutil::rsa_design(8);
    REQUIRE(has_security_path(d).verdict == PathVerdict::PathExists);
    Design d2 = d;
    for (auto &n : d2.nets)
        if (n.name == "last_bit")
            n.expr = e_bin(Op::Or, n.expr, e_slice(e_var("ct", 8), 1, 1));
    require_valid(d2);
    CHECK(has_security_path(d2).verdict == PathVerdict::PathExists);

    // and on a NoPath design, adding a secret operand can only go one way
    Design c5 = testutil::load_corpus("const5.mhdl");
    REQUIRE(has_security_path(c5).verdict == PathVerdict::NoPath);
    for (auto &n : c5.nets)
        if (n.name == "done")
            n.expr = e_bin(Op::And, n.expr, e_not(e_bin(Op::And, n.expr, e_var("sec", 1))));
    require_valid(c5);
    CHECK(has_security_path(c5).verdict == PathVerdict::PathExists);
}

TEST_CASE("taint labels never regress during propagation") {
    Design d = testutil::rsa_design(8);
    TaintState st = propagate(d);
    // every frontier entry must still be tainted at the fixpoint
    for (const auto &pass : st.frontier_log)
        for (const auto &sig : pass)
            CHECK(st.is_tainted(sig));
}

namespace {

// full behavioral diff: sweep every secret valuation under a fixed public
// valuation and collect (completed, latency, observable data) behaviors
bool secrets_observably_differ(const Design &d, uint64_t pub_pattern, int t_bound) {
    std::vector<std::pair<std::string, int>> secret_fields;
    for (const auto &p : d.data_inputs())
        if (d.annot.secret.count(p.name))
            secret_fields.push_back({p.name, p.width});
    int bits = 0;
    for (const auto &[n, w] : secret_fields) {
        (void)n;
        bits += w;
    }
    REQUIRE(bits <= 12);
    std::set<std::tuple<bool, int, std::map<std::string, uint64_t>>> behaviors;
    for (uint64_t v = 0; v < (uint64_t(1) << bits); v++) {
        Stimulus s;
        s.t_bound = t_bound;
        uint64_t rest = v;
        for (const auto &[name, w] : secret_fields) {
            s.secret_inputs[name] = rest & width_mask(w);
            rest >>= w;
        }
        for (const auto &p : d.data_inputs())
            if (!d.annot.secret.count(p.name))
                s.public_inputs[p.name] = pub_pattern & width_mask(p.width);
        TraceWitness w = run(d, s);
        behaviors.insert({w.completed, w.completed ? w.latency : 0, w.data_at_done});
    }
    return behaviors.size() > 1;
}

} // namespace

TEST_CASE("soundness vs exhaustive behavioral diff on small-secret corpus") {
    // if two secrets change any observable behavior (latency or data) under
    // equal publics, taint must say PATH_EXISTS
    for (const auto &f : testutil::corpus_files()) {
        CAPTURE(f);
        Design d = testutil::load_corpus(f);
        bool differs = false;
        for (uint64_t pubv : {0ull, 1ull, 0x5ull, ~0ull})
            differs = differs || secrets_observably_differ(d, pubv, 24);
        if (differs)
            CHECK(has_security_path(d).verdict == PathVerdict::PathExists);
    }
    // and the RSA schedule itself (8-bit secret)
    Design rsa = testutil::rsa_design(8);
    CHECK(secrets_observably_differ(rsa, 0x3c, 32));
    CHECK(has_security_path(rsa).verdict == PathVerdict::PathExists);
}
