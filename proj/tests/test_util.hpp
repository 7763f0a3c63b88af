#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pascal/bench_rsa.hpp"
#include "pascal/hdl.hpp"
#include "pascal/ir.hpp"

#ifndef PASCAL_CORPUS_DIR
#define PASCAL_CORPUS_DIR "tests/corpus"
#endif

namespace testutil {

inline std::string corpus_path(const std::string &name) {
    return std::string(PASCAL_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> corpus_files() {
    return {"const5.mhdl", "pubvar.mhdl", "xorpipe.mhdl", "neverdone.mhdl",
            "secretdbg.mhdl", "toggler.mhdl"};
}

inline pascal::Design load_corpus(const std::string &name) {
    return pascal::load_design_text(read_file(corpus_path(name)));
}

inline pascal::Design rsa_design(int n, int cs = 1, int cm = 1) {
    pascal::RsaParams p;
    p.n = n;
    p.cycles_square = cs;
    p.cycles_multiply = cm;
    return pascal::load_design_text(pascal::generate(p));
}

// Small hand-built design: a free-running counter that raises done at a
// fixed latency, with a disconnected 1-bit secret.
pascal::Design make_const_latency(int latency);

// Design whose completion latency equals (secret value + 2): a guaranteed
// multi-class channel with tiny state, handy for solver-path tests.
pascal::Design make_secret_delay(int secret_width);

} // namespace testutil
