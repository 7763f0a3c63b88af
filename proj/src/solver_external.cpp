#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "pascal/solver.hpp"

namespace pascal {

std::optional<SatResult> parse_solver_output(const std::string &text, int num_vars) {
    SatResult res;
    res.model.assign(num_vars, 0);
    bool have_status = false;
    std::istringstream in(text);
    std::string line;
    auto read_lits = [&](std::istringstream &ls) {
        long v;
        while (ls >> v) {
            if (v == 0)
                continue;
            int var = (int)(v < 0 ? -v : v) - 1;
            if (var >= 0 && var < num_vars)
                res.model[var] = v > 0 ? 1 : 0;
        }
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok))
            continue;
        if (tok == "c")
            continue;
        if (tok == "s") {
            std::string st;
            ls >> st;
            if (st == "SATISFIABLE")
                res.status = SatStatus::Sat, have_status = true;
            else if (st == "UNSATISFIABLE")
                res.status = SatStatus::Unsat, have_status = true;
            else if (st == "UNKNOWN" || st == "INDETERMINATE")
                res.status = SatStatus::Unknown, have_status = true;
            continue;
        }
        if (tok == "v") {
            read_lits(ls);
            continue;
        }
        // minisat file convention: "SAT" / "UNSAT" followed by literals
        if (tok == "SAT" || tok == "SATISFIABLE") {
            res.status = SatStatus::Sat;
            have_status = true;
            read_lits(ls);
            continue;
        }
        if (tok == "UNSAT" || tok == "UNSATISFIABLE") {
            res.status = SatStatus::Unsat;
            have_status = true;
            continue;
        }
        // bare literal lines after a SAT status line
        if (have_status && res.status == SatStatus::Sat &&
            (tok[0] == '-' || std::isdigit((unsigned char)tok[0]))) {
            std::istringstream all(line);
            read_lits(all);
        }
    }
    if (!have_status)
        return std::nullopt;
    return res;
}

namespace {

class External final : public SatSolver {
public:
    explicit External(std::string cmd) : command_(std::move(cmd)) {}

    void load(const Cnf &cnf) override { cnf_ = cnf; }

    void add_clause(const std::vector<Lit> &lits) override { cnf_.add_clause(lits); }

    SatResult solve(const SolverLimits &limits) override {
        (void)limits;  // budget enforcement is left to the external tool
        std::string path = temp_path();
        {
            std::ofstream out(path);
            if (!out)
                throw std::runtime_error("cannot write " + path);
            write_dimacs(cnf_, out);
        }
        std::string cmd = command_ + " " + path + " 2>/dev/null";
        FILE *pipe = popen(cmd.c_str(), "r");
        if (!pipe) {
            std::remove(path.c_str());
            throw std::runtime_error("cannot run solver command: " + command_);
        }
        std::string output;
        char buf[4096];
        size_t n;
        while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0)
            output.append(buf, n);
        pclose(pipe);
        std::remove(path.c_str());

        auto parsed = parse_solver_output(output, cnf_.num_vars);
        if (!parsed)
            throw std::runtime_error("external solver produced no recognizable verdict: " +
                                     command_);
        return *parsed;
    }

private:
    std::string command_;
    Cnf cnf_;
    int counter_ = 0;

    std::string temp_path() {
        const char *tmp = std::getenv("TMPDIR");
        std::string dir = tmp ? tmp : "/tmp";
        return dir + "/pascal_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter_++) + ".cnf";
    }
};

} // namespace

std::unique_ptr<SatSolver> make_external_solver(std::string command) {
    return std::make_unique<External>(std::move(command));
}

} // namespace pascal
