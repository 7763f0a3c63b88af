#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pascal/bench_rsa.hpp"
#include "pascal/compensator.hpp"
#include "pascal/enumerate.hpp"
#include "pascal/hdl.hpp"
#include "pascal/report.hpp"
#include "pascal/sha256.hpp"
#include "pascal/sim.hpp"

using namespace pascal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitChannel = 2;
constexpr int kExitInconclusive = 3;

struct LoadedDesign {
    Design design;
    std::string text;
    std::string path;
    std::optional<int> pragma_bound;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string &path, const std::string &data) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << data;
}

PragmaSet pragmas_from_sidecar(const std::string &path) {
    nlohmann::json j = nlohmann::json::parse(slurp(path));
    PragmaSet p;
    for (const auto &s : j.value("secret", std::vector<std::string>{}))
        p.secret.push_back(s);
    for (const auto &o : j.value("observable", std::vector<std::string>{}))
        p.observable.push_back(o);
    p.start = j.value("start", "");
    p.done = j.value("done", "");
    if (j.contains("bound"))
        p.bound = j["bound"].get<int>();
    return p;
}

LoadedDesign load(const std::string &path, const std::string &annotations) {
    LoadedDesign ld;
    ld.path = path;
    ld.text = slurp(path);
    SourceModule m = parse(ld.text);
    PragmaSet p = annotations.empty() ? m.pragmas : pragmas_from_sidecar(annotations);
    if (!annotations.empty() && m.pragmas.compensator && !p.compensator)
        p.compensator = m.pragmas.compensator;
    ld.pragma_bound = p.bound;
    ld.design = elaborate(m, p);
    return ld;
}

int resolve_bound(int cli_bound, const LoadedDesign &ld) {
    if (cli_bound > 0)
        return cli_bound;
    if (ld.pragma_bound && *ld.pragma_bound > 0)
        return *ld.pragma_bound;
    throw std::runtime_error(
        "no T_bound: pass --bound or add a `// @bound N` pragma to the design");
}

struct CommonOpts {
    std::string annotations;
    std::string out_dir = ".";
    std::string engine = "bmc";
    std::string solver_cmd;
    double timeout_ms = 0;
    int64_t max_conflicts = 0;
    int bound = 0;
    bool force = false;
};

EnumerateOptions make_enum_opts(const CommonOpts &c) {
    EnumerateOptions o;
    if (c.engine == "bmc" || c.engine == "bmc-property")
        o.mode = EngineMode::BmcProperty;
    else if (c.engine == "bmc-instrumented")
        o.mode = EngineMode::BmcInstrumented;
    else if (c.engine == "oracle")
        o.mode = EngineMode::Oracle;
    else
        throw std::runtime_error("unknown engine '" + c.engine +
                                 "' (bmc, bmc-instrumented, oracle)");
    o.solver_cmd = c.solver_cmd;
    if (o.solver_cmd.empty()) {
        const char *env = std::getenv("PASCAL_SOLVER_CMD");
        if (env && *env)
            o.solver_cmd = env;
    }
    if (c.timeout_ms > 0)
        o.limits.timeout_ms = c.timeout_ms;
    if (c.max_conflicts > 0)
        o.limits.max_conflicts = c.max_conflicts;
    o.force_oracle_domain = c.force;
    return o;
}

void fill_taint(ReportDocument &doc, const Design &d) {
    SecurityPathResult sp = has_security_path(d);
    doc.taint_verdict = sp.verdict == PathVerdict::PathExists ? "PATH_EXISTS" : "NO_PATH";
    for (const auto &s : sp.state.tainted_set())
        doc.tainted_signals.push_back(s);
    doc.witness_cones = sp.witness_cones;
}

std::string report_basename(const std::string &out_dir, const std::string &design_name) {
    return out_dir + "/" + design_name;
}

void write_report(const ReportDocument &doc, const CommonOpts &opts) {
    std::string base = report_basename(opts.out_dir, doc.design_name);
    spit(base + ".report.json", report_to_json(doc));
    if (doc.classes)
        spit(base + ".classes.csv", classes_to_csv(*doc.classes));
    std::cout << "report: " << base << ".report.json\n";
}

int cmd_check(const std::string &file, const CommonOpts &opts) {
    LoadedDesign ld = load(file, opts.annotations);
    SecurityPathResult sp = has_security_path(ld.design);
    if (sp.verdict == PathVerdict::NoPath) {
        std::cout << "NO_PATH: no structural flow from secrets to observables\n";
        return kExitOk;
    }
    std::cout << "PATH_EXISTS: secrets can reach observable ports\n";
    for (const auto &[obs, cone] : sp.witness_cones) {
        std::cout << "  " << obs << " <-";
        int shown = 0;
        for (const auto &s : cone) {
            std::cout << " " << s;
            if (++shown >= 12) {
                std::cout << " ... (" << cone.size() << " signals)";
                break;
            }
        }
        std::cout << "\n";
    }
    return kExitChannel;
}

int classes_exit_code(const ReportDocument &doc) {
    if (doc.classes && doc.classes->verdict == EnumVerdict::Inconclusive)
        return kExitInconclusive;
    if (doc.noninterference) {
        switch (doc.noninterference->verdict) {
        case NoninterferenceResult::Verdict::Inconclusive:
            return kExitInconclusive;
        case NoninterferenceResult::Verdict::Insecure:
            return kExitChannel;
        case NoninterferenceResult::Verdict::Secure:
            return kExitOk;
        }
    }
    return kExitOk;
}

ReportDocument analyze(const LoadedDesign &ld, int bound, const CommonOpts &opts,
                       bool run_ni) {
    ReportDocument doc;
    doc.design_name = ld.design.name;
    doc.input_file = ld.path;
    doc.content_sha256 = sha256_hex(ld.text);
    doc.t_bound = bound;
    fill_taint(doc, ld.design);
    EnumerateOptions eo = make_enum_opts(opts);
    doc.classes = enumerate_classes(ld.design, bound, eo);
    if (run_ni && doc.taint_verdict == "PATH_EXISTS" &&
        doc.classes->verdict != EnumVerdict::Inconclusive)
        doc.noninterference = check_noninterference(ld.design, bound, eo);
    return doc;
}

void print_classes(const ReportDocument &doc) {
    const TimingClassReport &r = *doc.classes;
    std::cout << "taint: " << doc.taint_verdict << "\n";
    std::cout << "classes (" << r.engine << "/" << r.mode << ", bound " << doc.t_bound
              << "): " << enum_verdict_name(r.verdict);
    if (!r.classes.empty()) {
        std::cout << " {";
        auto set = r.latency_set();
        size_t i = 0;
        for (int t : set)
            std::cout << t << (++i < set.size() ? "," : "");
        std::cout << "}";
    }
    std::cout << (r.exhausted ? " exhausted" : " PARTIAL") << "\n";
    if (doc.noninterference)
        std::cout << "noninterference: " << ni_verdict_name(doc.noninterference->verdict)
                  << "\n";
}

int cmd_enumerate(const std::string &file, const CommonOpts &opts) {
    LoadedDesign ld = load(file, opts.annotations);
    int bound = resolve_bound(opts.bound, ld);
    ReportDocument doc = analyze(ld, bound, opts, true);
    print_classes(doc);
    write_report(doc, opts);
    return classes_exit_code(doc);
}

int cmd_harden(const std::string &file, const CommonOpts &opts) {
    LoadedDesign ld = load(file, opts.annotations);
    int bound = resolve_bound(opts.bound, ld);
    ReportDocument doc = analyze(ld, bound, opts, true);
    print_classes(doc);
    if (doc.classes->verdict == EnumVerdict::Inconclusive) {
        write_report(doc, opts);
        std::cerr << "enumeration inconclusive; not hardening\n";
        return kExitInconclusive;
    }
    if (doc.classes->verdict == EnumVerdict::NoPath) {
        write_report(doc, opts);
        std::cout << "design has no secret-to-observable flow; nothing to harden\n";
        return kExitOk;
    }
    CompensatorSpec spec = synthesize_spec(*doc.classes);
    HardenResult hr = harden(ld.design, spec);
    doc.compensator = hr.spec;
    doc.overhead = overhead(*doc.classes, ld.design);
    std::string sduv_path =
        report_basename(opts.out_dir, ld.design.name) + ".sduv.mhdl";
    spit(sduv_path, emit(hr.sduv));
    doc.sduv_file = sduv_path;
    write_report(doc, opts);
    std::cout << "sduv: " << sduv_path << " (done fixed at t_max=" << hr.spec.t_max
              << ", counter " << hr.spec.counter_width << " bits)\n";
    return kExitOk;
}

int cmd_verify(const std::string &file, const CommonOpts &opts) {
    LoadedDesign ld = load(file, opts.annotations);
    int bound = resolve_bound(opts.bound, ld);
    ReportDocument doc = analyze(ld, bound, opts, true);
    print_classes(doc);
    write_report(doc, opts);
    const TimingClassReport &r = *doc.classes;
    if (r.verdict == EnumVerdict::Inconclusive ||
        (doc.noninterference &&
         doc.noninterference->verdict == NoninterferenceResult::Verdict::Inconclusive))
        return kExitInconclusive;
    if (r.verdict == EnumVerdict::NoPath) {
        std::cout << "verified: no secret-to-observable flow at all\n";
        return kExitOk;
    }
    bool one_class = r.exhausted && r.classes.size() == 1;
    bool ni_ok = !doc.noninterference ||
                 doc.noninterference->verdict == NoninterferenceResult::Verdict::Secure;
    if (one_class && ni_ok) {
        std::cout << "verified: single timing class at " << r.t_max() << "\n";
        return kExitOk;
    }
    std::cout << "NOT timing-safe: " << r.classes.size() << " classes\n";
    return kExitChannel;
}

int cmd_bench(const std::string &family, int bits, int cs, int cm,
              const std::string &out_dir) {
    if (family != "rsa")
        throw std::runtime_error("unknown benchmark family '" + family + "'");
    RsaParams p;
    p.n = bits;
    p.cycles_square = cs;
    p.cycles_multiply = cm;
    std::string text = generate(p);
    load_design_text(text);  // generator self-check
    std::string path = out_dir + "/" + rsa_module_name(p) + ".mhdl";
    spit(path, text);
    std::cout << path << "\n";
    return kExitOk;
}

int cmd_sim(const std::string &file, const CommonOpts &opts,
            const std::vector<std::string> &sets, bool trace) {
    LoadedDesign ld = load(file, opts.annotations);
    int bound = resolve_bound(opts.bound, ld);
    Stimulus s;
    s.t_bound = bound;
    for (const auto &kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects name=value, got '" + kv + "'");
        std::string name = kv.substr(0, eq);
        uint64_t value = std::stoull(kv.substr(eq + 1), nullptr, 0);
        if (ld.design.annot.secret.count(name))
            s.secret_inputs[name] = value;
        else
            s.public_inputs[name] = value;
    }
    for (const auto &p : ld.design.data_inputs()) {
        if (!s.public_inputs.count(p.name) && !s.secret_inputs.count(p.name)) {
            if (ld.design.annot.secret.count(p.name))
                s.secret_inputs[p.name] = 0;
            else
                s.public_inputs[p.name] = 0;
        }
    }
    if (trace) {
        std::cout << dump_trace(ld.design, s, bound + 1);
        return kExitOk;
    }
    TraceWitness w = run(ld.design, s);
    if (!w.completed) {
        std::cout << "did not complete within " << bound << " cycles\n";
        return kExitChannel;
    }
    std::cout << "latency: " << w.latency << "\n";
    for (const auto &[port, value] : w.data_at_done)
        std::cout << port << " = 0x" << std::hex << value << std::dec << "\n";
    for (const auto &a : w.failed_assertions)
        std::cout << "assertion failed: " << a << "\n";
    return kExitOk;
}

int cmd_solve(const std::string &file) {
    std::ifstream in(file);
    if (!in)
        throw std::runtime_error("cannot open " + file);
    Cnf cnf = read_dimacs(in);
    auto solver = make_cdcl_solver();
    solver->load(cnf);
    SatResult r = solver->solve({});
    if (r.status == SatStatus::Sat) {
        std::cout << "s SATISFIABLE\n";
        std::string line = "v";
        for (int v = 0; v < cnf.num_vars; v++) {
            line += " " + std::to_string(r.model[v] ? v + 1 : -(v + 1));
            if (line.size() > 70) {
                std::cout << line << "\n";
                line = "v";
            }
        }
        std::cout << line << " 0\n";
    } else if (r.status == SatStatus::Unsat) {
        std::cout << "s UNSATISFIABLE\n";
    } else {
        std::cout << "s UNKNOWN\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"pascal: timing side-channel class enumeration and removal for mini-HDL "
                 "designs"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string file;
    auto add_common = [&](CLI::App *cmd, bool needs_bound) {
        cmd->add_option("file", file, "input .mhdl design")->required();
        cmd->add_option("--annotations", opts.annotations,
                        "JSON sidecar overriding the security pragmas");
        if (needs_bound) {
            cmd->add_option("--bound", opts.bound, "exploration bound T in cycles");
            cmd->add_option("--engine", opts.engine,
                            "bmc | bmc-instrumented | oracle (default bmc)");
            cmd->add_option("--solver-cmd", opts.solver_cmd,
                            "external DIMACS solver command (else $PASCAL_SOLVER_CMD, else "
                            "built-in CDCL)");
            cmd->add_option("--timeout-ms", opts.timeout_ms, "per-query solver timeout");
            cmd->add_option("--max-conflicts", opts.max_conflicts,
                            "per-query conflict budget");
            cmd->add_option("--out", opts.out_dir, "output directory (default .)");
            cmd->add_flag("--force", opts.force, "lift the oracle-domain size guard");
        }
    };

    CLI::App *check = app.add_subcommand("check", "taint pre-check only");
    add_common(check, false);

    CLI::App *enumerate = app.add_subcommand("enumerate", "enumerate timing classes");
    add_common(enumerate, true);

    CLI::App *harden =
        app.add_subcommand("harden", "enumerate, insert the compensator, emit the sDUV");
    add_common(harden, true);

    CLI::App *verify =
        app.add_subcommand("verify", "re-check a hardened design: expect one class");
    add_common(verify, true);

    CLI::App *bench = app.add_subcommand("bench", "generate benchmark designs");
    std::string family;
    int bits = 8, cs = 1, cm = 1;
    std::string bench_out = ".";
    bench->add_option("family", family, "benchmark family (rsa)")->required();
    bench->add_option("--bits", bits, "key width in bits")->required();
    bench->add_option("--cs", cs, "cycles per squaring step");
    bench->add_option("--cm", cm, "cycles per conditional multiply");
    bench->add_option("--out", bench_out, "output directory");

    CLI::App *sim = app.add_subcommand("sim", "run one stimulus on the interpreter");
    std::vector<std::string> sets;
    bool trace = false;
    add_common(sim, true);
    sim->add_option("--set", sets, "input valuation name=value (repeatable)");
    sim->add_flag("--trace", trace, "dump a cycle/signal/value trace");

    CLI::App *solve = app.add_subcommand("solve", "run the built-in SAT solver on DIMACS");
    std::string cnf_file;
    solve->add_option("file", cnf_file, "DIMACS CNF file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(check))
            return cmd_check(file, opts);
        if (app.got_subcommand(enumerate))
            return cmd_enumerate(file, opts);
        if (app.got_subcommand(harden))
            return cmd_harden(file, opts);
        if (app.got_subcommand(verify))
            return cmd_verify(file, opts);
        if (app.got_subcommand(bench))
            return cmd_bench(family, bits, cs, cm, bench_out);
        if (app.got_subcommand(sim))
            return cmd_sim(file, opts, sets, trace);
        if (app.got_subcommand(solve))
            return cmd_solve(cnf_file);
    } catch (const SourceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const ElabError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
