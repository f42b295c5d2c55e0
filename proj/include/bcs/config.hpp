#pragma once

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcs/solver.hpp"

namespace bcs {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Full run description parsed from a sectioned key-value config file.
/// Exact keys are documented in docs/config.md; unknown keys are rejected.
struct RunConfig {
    // [lattice]
    int d = 2;
    std::array<double, 4> A = {1.0, 0.0, 0.0, 1.0};
    // [kernel]
    double C1 = 0.0;
    double C2 = 0.0;
    double nu = 0.0;
    bool nu_set = false;
    // [basis]
    int mu = 3;
    int n = 64;
    // [solver]
    int k = 1;
    SolverConfig solver;
    std::string init = "constant";
    std::uint64_t seed = 0;
    std::string init_file;
    // [output]
    std::string solution_path = "solution.txt";
    std::string report_path = "report.txt";
    std::string spectrum_path;  // optional
    std::string format = "text";

    Lattice lattice() const {
        return d == 1 ? Lattice(A[0]) : Lattice(A[0], A[1], A[2], A[3]);
    }
    SplineBasis basis() const { return SplineBasis(d, mu, n); }
    KernelSpec kernel() const { return KernelSpec(C1, C2, nu); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& val, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) +
                          ": expected a number, got '" + val + "'");
    }
}

inline long parse_int(const std::string& val, int line) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) +
                          ": expected an integer, got '" + val + "'");
    }
}

inline bool parse_bool(const std::string& val, int line) {
    if (val == "true" || val == "1" || val == "yes") return true;
    if (val == "false" || val == "0" || val == "no") return false;
    throw ConfigError("line " + std::to_string(line) +
                      ": expected a boolean, got '" + val + "'");
}

}  // namespace detail

inline RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    std::string section;
    std::string line;
    int lineno = 0;
    bool A_given = false;
    std::vector<double> A_rows;

    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "lattice" && section != "kernel" &&
                section != "basis" && section != "solver" &&
                section != "output")
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));

        auto unknown = [&]() {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": unknown key '" + key + "' in section [" +
                              section + "]");
        };

        if (section == "lattice") {
            if (key == "d") cfg.d = static_cast<int>(detail::parse_int(val, lineno));
            else if (key == "A") {
                std::istringstream as(val);
                double v;
                A_rows.clear();
                while (as >> v) A_rows.push_back(v);
                A_given = true;
            } else unknown();
        } else if (section == "kernel") {
            if (key == "C1") cfg.C1 = detail::parse_double(val, lineno);
            else if (key == "C2") cfg.C2 = detail::parse_double(val, lineno);
            else if (key == "nu") {
                cfg.nu = detail::parse_double(val, lineno);
                cfg.nu_set = true;
            } else unknown();
        } else if (section == "basis") {
            if (key == "mu") cfg.mu = static_cast<int>(detail::parse_int(val, lineno));
            else if (key == "n") cfg.n = static_cast<int>(detail::parse_int(val, lineno));
            else unknown();
        } else if (section == "solver") {
            if (key == "k") cfg.k = static_cast<int>(detail::parse_int(val, lineno));
            else if (key == "tol") cfg.solver.tol = detail::parse_double(val, lineno);
            else if (key == "max_iter")
                cfg.solver.max_iter = static_cast<int>(detail::parse_int(val, lineno));
            else if (key == "alpha") cfg.solver.alpha = detail::parse_double(val, lineno);
            else if (key == "q")
                cfg.solver.q = static_cast<int>(detail::parse_int(val, lineno));
            else if (key == "enforce_antisymmetry")
                cfg.solver.enforce_antisymmetry = detail::parse_bool(val, lineno);
            else if (key == "init") cfg.init = val;
            else if (key == "seed")
                cfg.seed = static_cast<std::uint64_t>(detail::parse_int(val, lineno));
            else if (key == "init_file") cfg.init_file = val;
            else unknown();
        } else if (section == "output") {
            if (key == "solution") cfg.solution_path = val;
            else if (key == "report") cfg.report_path = val;
            else if (key == "spectrum") cfg.spectrum_path = val;
            else if (key == "format") cfg.format = val;
            else unknown();
        } else {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": key outside any section");
        }
    }

    if (A_given) {
        if (static_cast<int>(A_rows.size()) != cfg.d * cfg.d)
            throw ConfigError("[lattice] A: expected " +
                              std::to_string(cfg.d * cfg.d) + " entries");
        for (std::size_t i = 0; i < A_rows.size(); ++i) cfg.A[i] = A_rows[i];
    }

    // cross-field validation
    if (cfg.d < 1 || cfg.d > 2) throw ConfigError("[lattice] d must be 1 or 2");
    if (cfg.C2 != 0.0 && !cfg.nu_set)
        throw ConfigError("[kernel] nu is required when C2 != 0");
    if (cfg.k < 1 || cfg.k > 2) throw ConfigError("[solver] k must be 1 or 2");
    if (cfg.mu < 0 || cfg.n <= cfg.mu + 1)
        throw ConfigError("[basis] requires mu >= 0 and n > mu + 1");
    if (cfg.format != "text" && cfg.format != "binary")
        throw ConfigError("[output] format must be 'text' or 'binary'");
    if (cfg.init != "constant" && cfg.init != "dwave-seed" &&
        cfg.init != "random" && cfg.init != "file")
        throw ConfigError("[solver] init must be one of constant, dwave-seed, "
                          "random, file");
    if (cfg.init == "file" && cfg.init_file.empty())
        throw ConfigError("[solver] init = file requires init_file");
    try {
        cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[solver] ") + e.what());
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    return parse_config(is);
}

}  // namespace bcs
