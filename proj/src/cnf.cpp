#include "pascal/cnf.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace pascal {

void write_dimacs(const Cnf &cnf, std::ostream &out) {
    out << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
    for (const auto &c : cnf.clauses) {
        for (Lit l : c)
            out << (lit_sign(l) ? -(lit_var(l) + 1) : (lit_var(l) + 1)) << " ";
        out << "0\n";
    }
}

std::string to_dimacs(const Cnf &cnf) {
    std::ostringstream ss;
    write_dimacs(cnf, ss);
    return ss.str();
}

Cnf read_dimacs(std::istream &in) {
    Cnf cnf;
    cnf.clauses.clear();  // no implicit TRUE axiom for external formulas
    cnf.num_vars = 0;
    std::string tok;
    int declared_vars = 0;
    long declared_clauses = -1;
    std::vector<Lit> cur;
    while (in >> tok) {
        if (tok == "c") {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            in >> fmt >> declared_vars >> declared_clauses;
            if (fmt != "cnf")
                throw std::runtime_error("DIMACS: expected 'p cnf'");
            cnf.num_vars = declared_vars;
            continue;
        }
        long v = 0;
        try {
            v = std::stol(tok);
        } catch (const std::exception &) {
            throw std::runtime_error("DIMACS: bad token '" + tok + "'");
        }
        if (v == 0) {
            cnf.add_clause(cur);
            cur.clear();
        } else {
            int var = (int)(v < 0 ? -v : v) - 1;
            if (var + 1 > cnf.num_vars)
                cnf.num_vars = var + 1;
            cur.push_back(mk_lit(var, v < 0));
        }
    }
    if (!cur.empty())
        cnf.add_clause(cur);
    return cnf;
}

} // namespace pascal
