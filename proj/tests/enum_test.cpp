#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pascal/enumerate.hpp"
#include "test_util.hpp"

using namespace pascal;

TEST_CASE("build_modified_duv: empty union clause makes pascal_hit track first done") {
    Design d = testutil::make_const_latency(5);
    ModifiedDuv mod = build_modified_duv(d, {}, 12);
    CHECK(validate_design(mod.design).empty());
    // simulate: hit must pulse exactly at the first done cycle
    Stimulus s;
    s.t_bound = 12;
    RunOptions opts;
    opts.extra_signals = {mod.hit_name, mod.counter_name};
    TraceWitness w = run(mod.design, s, opts);
    auto hit = w.waveform(mod.hit_name);
    auto cnt = w.waveform(mod.counter_name);
    REQUIRE(w.completed);
    CHECK(w.latency == 5);
    for (int k = 0; k <= 5; k++) {
        CHECK(hit[k] == (k == 5 ? 1u : 0u));
        CHECK(cnt[k] == (uint64_t)k);
    }
}

TEST_CASE("build_modified_duv: union clause suppresses blocked latencies") {
    Design d = testutil::make_const_latency(5);
    BlockedSet blocked;
    blocked.add(5);
    ModifiedDuv mod = build_modified_duv(d, blocked, 12);
    Stimulus s;
    s.t_bound = 12;
    RunOptions opts;
    opts.extra_signals = {mod.hit_name};
    TraceWitness w = run(mod.design, s, opts);
    for (uint64_t v : w.waveform(mod.hit_name))
        CHECK(v == 0);
}

TEST_CASE("build_modified_duv: blocked latency above the bound is rejected") {
    Design d = testutil::make_const_latency(5);
    BlockedSet blocked;
    blocked.add(40);
    CHECK_THROWS_AS(build_modified_duv(d, blocked, 12), BoundTooSmall);
}

TEST_CASE("find_witness: single-class design with its class blocked gives NONE") {
    Design d = testutil::make_const_latency(5);
    BlockedSet blocked;
    blocked.add(5);
    for (EngineMode m : {EngineMode::BmcProperty, EngineMode::BmcInstrumented}) {
        CAPTURE((int)m);
        EnumerateOptions opts;
        opts.mode = m;
        FindWitnessResult r = find_witness(d, blocked, 12, opts);
        CHECK(r.status == FindWitnessResult::Status::None);
    }
}

TEST_CASE("find_witness: rsa8 finds a valid unblocked latency") {
    Design d = testutil::rsa_design(8);
    BlockedSet blocked;
    blocked.add(9);
    blocked.add(10);
    for (EngineMode m : {EngineMode::BmcProperty, EngineMode::BmcInstrumented}) {
        CAPTURE((int)m);
        EnumerateOptions opts;
        opts.mode = m;
        FindWitnessResult r = find_witness(d, blocked, 32, opts);
        REQUIRE(r.status == FindWitnessResult::Status::Found);
        CHECK(r.witness.latency >= 11);
        CHECK(r.witness.latency <= 16);
        // the returned witness has already replayed; double-check anyway
        TraceWitness replay = run(d, r.witness.stimulus);
        CHECK(replay.latency == r.witness.latency);
    }
}

TEST_CASE("find_witness: all rsa8 classes blocked gives NONE") {
    Design d = testutil::rsa_design(8);
    BlockedSet blocked;
    for (int t = 9; t <= 16; t++)
        blocked.add(t);
    FindWitnessResult r = find_witness(d, blocked, 32);
    CHECK(r.status == FindWitnessResult::Status::None);
}

TEST_CASE("enumerate_classes: rsa8 yields exactly 9..16, exhausted") {
    Design d = testutil::rsa_design(8);
    TimingClassReport rep = enumerate_classes(d, 32);
    CHECK(rep.verdict == EnumVerdict::Classes);
    CHECK(rep.exhausted);
    CHECK(rep.latency_set() == std::set<int>{9, 10, 11, 12, 13, 14, 15, 16});
    CHECK(rep.t_max() == 16);
    CHECK(rep.engine == "bmc");
    // monotone progress: iterations = classes + the final UNSAT round
    CHECK(rep.iterations == (int)rep.classes.size() + 1);
    CHECK(rep.iterations <= rep.t_bound);
    // latencies pairwise distinct
    CHECK(rep.latency_set().size() == rep.classes.size());
}

TEST_CASE("enumerate_classes: constant-latency design has one class") {
    Design d = testutil::make_const_latency(5);
    SUBCASE("secret-free cone still enumerates under PATH_EXISTS gate") {
        // const_latency's secret is disconnected: NoPath short-circuit
        TimingClassReport rep = enumerate_classes(d, 12);
        CHECK(rep.verdict == EnumVerdict::NoPath);
        CHECK(rep.classes.empty());
        CHECK(rep.exhausted);
    }
    SUBCASE("xorpipe has a data path and exactly one class") {
        Design x = testutil::load_corpus("xorpipe.mhdl");
        TimingClassReport rep = enumerate_classes(x, 8);
        CHECK(rep.verdict == EnumVerdict::Classes);
        CHECK(rep.latency_set() == std::set<int>{3});
        CHECK(rep.exhausted);
    }
}

TEST_CASE("enumerate_classes: never-done design is flagged") {
    Design d = testutil::load_corpus("neverdone.mhdl");
    TimingClassReport rep = enumerate_classes(d, 8);
    CHECK(rep.verdict == EnumVerdict::NeverCompletes);
    CHECK(rep.classes.empty());
    CHECK(rep.exhausted);
}

TEST_CASE("enumerate_classes: conflict budget turns into INCONCLUSIVE") {
    Design d = testutil::rsa_design(12);
    EnumerateOptions opts;
    opts.limits.max_conflicts = 1;
    TimingClassReport rep = enumerate_classes(d, 36, opts);
    CHECK(rep.verdict == EnumVerdict::Inconclusive);
    CHECK(!rep.exhausted);
}

TEST_CASE("engine-mode agreement on the corpus") {
    auto class_set = [](const Design &d, int bound, EngineMode m) {
        EnumerateOptions opts;
        opts.mode = m;
        return enumerate_classes(d, bound, opts).latency_set();
    };
    std::vector<std::pair<Design, int>> designs;
    for (const auto &f : testutil::corpus_files())
        designs.push_back({testutil::load_corpus(f), 24});
    designs.push_back({testutil::rsa_design(8), 32});
    designs.push_back({testutil::make_secret_delay(3), 16});
    for (auto &[d, bound] : designs) {
        CAPTURE(d.name);
        auto property = class_set(d, bound, EngineMode::BmcProperty);
        auto instrumented = class_set(d, bound, EngineMode::BmcInstrumented);
        CHECK(property == instrumented);
    }
}

TEST_CASE("oracle equivalence: BMC class set equals exhaustive simulation") {
    SUBCASE("rsa8 against the full nonzero key sweep") {
        Design d = testutil::rsa_design(8);
        TimingClassReport bmc = enumerate_classes(d, 32);
        ClassHistogram oracle = exhaustive_classes_all_inputs(d, 32);
        CHECK(bmc.latency_set() == oracle.latencies());
    }
    SUBCASE("small corpus designs, joint input domains") {
        for (const auto &f : testutil::corpus_files()) {
            CAPTURE(f);
            Design d = testutil::load_corpus(f);
            TimingClassReport bmc = enumerate_classes(d, 24);
            if (bmc.verdict == EnumVerdict::NoPath)
                continue;  // the gate skips enumeration; nothing to compare
            ClassHistogram oracle = exhaustive_classes_all_inputs(d, 24);
            CHECK(bmc.latency_set() == oracle.latencies());
        }
    }
    SUBCASE("secret-delay design: classes are secret+2") {
        Design d = testutil::make_secret_delay(3);
        TimingClassReport bmc = enumerate_classes(d, 16);
        CHECK(bmc.latency_set() == std::set<int>{2, 3, 4, 5, 6, 7, 8, 9});
        ClassHistogram oracle = exhaustive_classes_all_inputs(d, 16);
        CHECK(bmc.latency_set() == oracle.latencies());
    }
}

TEST_CASE("witness validity: every reported witness replays to its latency") {
    Design d = testutil::rsa_design(8);
    TimingClassReport rep = enumerate_classes(d, 32);
    for (const auto &c : rep.classes) {
        TraceWitness replay = run(d, c.witness.stimulus);
        CHECK(replay.completed);
        CHECK(replay.latency == c.latency);
        CHECK(replay.waveform("done") == c.witness.waveform("done"));
    }
}

TEST_CASE("check_noninterference: rsa8 yields a replayable witness pair") {
    Design d = testutil::rsa_design(8);
    NoninterferenceResult r = check_noninterference(d, 32);
    REQUIRE(r.verdict == NoninterferenceResult::Verdict::Insecure);
    REQUIRE(r.witness_pair.has_value());
    const auto &[a, b] = *r.witness_pair;
    CHECK(a.latency != b.latency);
    CHECK(a.stimulus.public_inputs == b.stimulus.public_inputs);
    CHECK(a.stimulus.secret_inputs != b.stimulus.secret_inputs);
    CHECK(run(d, a.stimulus).latency == a.latency);
    CHECK(run(d, b.stimulus).latency == b.latency);
}

TEST_CASE("check_noninterference: constant latency and public-driven designs are SECURE") {
    CHECK(check_noninterference(testutil::make_const_latency(5), 12).verdict ==
          NoninterferenceResult::Verdict::Secure);
    CHECK(check_noninterference(testutil::load_corpus("xorpipe.mhdl"), 8).verdict ==
          NoninterferenceResult::Verdict::Secure);
    // multiple classes driven purely by a public select: still SECURE
    Design pub = testutil::load_corpus("pubvar.mhdl");
    TimingClassReport rep = enumerate_classes(pub, 10);
    CHECK(rep.latency_set() == std::set<int>{3, 5});
    CHECK(check_noninterference(pub, 10).verdict ==
          NoninterferenceResult::Verdict::Secure);
}

TEST_CASE("external solver path drives the same enumeration") {
    // PASCAL_SOLVER_CMD-style handoff is exercised via cli_test; here the
    // in-process external interface gets a quick sanity pass when available
    const char *bin = std::getenv("PASCAL_TEST_SOLVER");
    if (!bin)
        return;  // optional: set PASCAL_TEST_SOLVER to run
    EnumerateOptions opts;
    opts.solver_cmd = bin;
    Design d = testutil::rsa_design(8);
    TimingClassReport rep = enumerate_classes(d, 32, opts);
    CHECK(rep.latency_set() == std::set<int>{9, 10, 11, 12, 13, 14, 15, 16});
}
