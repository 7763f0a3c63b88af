#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "pascal/enumerate.hpp"
#include "pascal/sim.hpp"
#include "test_util.hpp"

using namespace pascal;

TEST_CASE("generate: parses and elaborates with zero diagnostics") {
    for (int n : {4, 8, 12, 16, 32}) {
        CAPTURE(n);
        RsaParams p;
        p.n = n;
        Design d = load_design_text(generate(p));
        CHECK(validate_design(d).empty());
        CHECK(d.name == "rsa" + std::to_string(n));
        CHECK(d.annot.secret == std::set<std::string>{"key"});
        CHECK(d.annot.done == "done");
    }
}

TEST_CASE("generate: parameter validation") {
    RsaParams bad;
    bad.n = 3;
    CHECK_THROWS_AS(generate(bad), ParamOutOfRange);
    bad.n = 33;
    CHECK_THROWS_AS(generate(bad), ParamOutOfRange);
    bad.n = 8;
    bad.cycles_square = 0;
    CHECK_THROWS_AS(generate(bad), ParamOutOfRange);
}

TEST_CASE("expected_latency: closed form") {
    RsaParams p32;
    p32.n = 32;
    CHECK(expected_latency(p32, 1) == 33);                    // popcount 1
    CHECK(expected_latency(p32, 0xFFFFFFFFull) == 64);        // popcount 32
    RsaParams p8;
    p8.n = 8;
    CHECK(expected_latency(p8, 0x80) == 9);
    CHECK(expected_latency(p8, 0xFF) == 16);
    CHECK(expected_latency(p8, 0x0F) == 12);
    CHECK_THROWS_AS(expected_latency(p8, 0), ZeroKey);
    CHECK_THROWS_AS(expected_latency(p8, 0x100), ParamOutOfRange);
}

TEST_CASE("simulated latency equals the closed form for every 8-bit key") {
    RsaParams p;
    p.n = 8;
    Design d = load_design_text(generate(p));
    CompiledDesign cd(d);
    for (uint64_t key = 1; key < 256; key++) {
        Stimulus s;
        s.t_bound = 32;
        s.secret_inputs["key"] = key;
        s.public_inputs["ct"] = key * 37 & 0xff;
        TraceWitness w = run(cd, s, {});
        REQUIRE(w.completed);
        CHECK(w.latency == expected_latency(p, key));
    }
}

TEST_CASE("simulated latency equals the closed form for every 12-bit key") {
    RsaParams p;
    p.n = 12;
    Design d = load_design_text(generate(p));
    CompiledDesign cd(d);
    RunOptions fast;
    fast.record_trace = false;
    for (uint64_t key = 1; key < 4096; key++) {
        Stimulus s;
        s.t_bound = 40;
        s.secret_inputs["key"] = key;
        s.public_inputs["ct"] = (key * 131) & 0xfff;
        TraceWitness w = run(cd, s, fast);
        REQUIRE(w.completed);
        REQUIRE(w.latency == expected_latency(p, key));
    }
}

TEST_CASE("keys with equal popcount share a latency class") {
    RsaParams p;
    p.n = 8;
    Design d = load_design_text(generate(p));
    CompiledDesign cd(d);
    RunOptions fast;
    fast.record_trace = false;
    std::map<int, int> latency_of_popcount;
    for (uint64_t key = 1; key < 256; key++) {
        Stimulus s;
        s.t_bound = 32;
        s.secret_inputs["key"] = key;
        TraceWitness w = run(cd, s, fast);
        int pop = std::popcount(key);
        auto it = latency_of_popcount.find(pop);
        if (it == latency_of_popcount.end())
            latency_of_popcount[pop] = w.latency;
        else
            CHECK(it->second == w.latency);
    }
    CHECK(latency_of_popcount.size() == 8);
}

TEST_CASE("class-set law under schedule parameterization at n=8") {
    for (auto [cs, cm] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}}) {
        CAPTURE(cs);
        CAPTURE(cm);
        RsaParams p;
        p.n = 8;
        p.cycles_square = cs;
        p.cycles_multiply = cm;
        Design d = load_design_text(generate(p));
        TimingClassReport rep = enumerate_classes(d, suggested_bound(p));
        std::set<int> expect;
        for (int pop = 1; pop <= 8; pop++)
            expect.insert(8 * cs + pop * cm);
        CHECK(rep.latency_set() == expect);
        CHECK(rep.exhausted);
    }
}

TEST_CASE("zero key hangs the schedule on purpose") {
    Design d = testutil::rsa_design(8);
    Stimulus s;
    s.t_bound = 64;
    s.secret_inputs["key"] = 0;
    CHECK(!run(d, s).completed);
}

TEST_CASE("suggested bound comfortably covers the slowest key") {
    for (int n : {4, 8, 16}) {
        RsaParams p;
        p.n = n;
        CHECK(suggested_bound(p) > expected_latency(p, width_mask(n)));
    }
}
