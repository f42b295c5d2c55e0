#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcs/circulant.hpp"
#include "bcs/nonlinearity.hpp"
#include "bcs/solver.hpp"
#include "bcs/splines.hpp"

namespace bcs::io {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct GridData {
    int d = 0, n = 0, k = 1;
    int a = 0, b = 0;  // component indices
    std::vector<cplx> samples;  // cell centers, row-major
};

inline std::string component_path(const std::string& base, int k, int a,
                                  int b) {
    if (k == 1) return base;
    const auto dot = base.find_last_of('.');
    const std::string suffix =
        "_" + std::to_string(a) + std::to_string(b);
    if (dot == std::string::npos) return base + suffix;
    return base.substr(0, dot) + suffix + base.substr(dot);
}

/// Text grid format: comment header, then one row per cell center,
/// "x1 [x2] Re(f) Im(f)" in row-major order.
inline void write_grid_text(const std::string& path, const SplineBasis& basis,
                            int k, int a, int b,
                            const std::vector<cplx>& samples) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "# bcsgap solution grid\n";
    os << "# d=" << basis.d << " n=" << basis.n << " k=" << k
       << " component=" << a << b << " convention=cell-centers\n";
    os << "# columns: " << (basis.d == 1 ? "x1" : "x1 x2")
       << " Re(f) Im(f)\n";
    os << std::setprecision(17);
    const double h = basis.h();
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        if (basis.d == 1) {
            os << (idx + 0.5) * h;
        } else {
            os << (idx / basis.n + 0.5) * h << ' '
               << (idx % basis.n + 0.5) * h;
        }
        os << ' ' << samples[idx].real() << ' ' << samples[idx].imag()
           << '\n';
    }
    if (!os) throw IoError("write failed: " + path);
}

/// Binary twin: magic "BCSG", five little-endian int64 fields
/// (d, n, k, a, b), then n^d complex samples as interleaved little-endian
/// IEEE-754 doubles (Re, Im), row-major cell-center order.
inline void write_grid_binary(const std::string& path,
                              const SplineBasis& basis, int k, int a, int b,
                              const std::vector<cplx>& samples) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os.write("BCSG", 4);
    const std::int64_t meta[5] = {basis.d, basis.n, k, a, b};
    os.write(reinterpret_cast<const char*>(meta), sizeof(meta));
    for (const auto& s : samples) {
        const double re = s.real(), im = s.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof(double));
        os.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
    if (!os) throw IoError("write failed: " + path);
}

inline GridData read_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    char magic[4] = {};
    is.read(magic, 4);
    GridData g;
    if (is && std::memcmp(magic, "BCSG", 4) == 0) {
        std::int64_t meta[5];
        is.read(reinterpret_cast<char*>(meta), sizeof(meta));
        if (!is) throw IoError("truncated binary grid: " + path);
        g.d = static_cast<int>(meta[0]);
        g.n = static_cast<int>(meta[1]);
        g.k = static_cast<int>(meta[2]);
        g.a = static_cast<int>(meta[3]);
        g.b = static_cast<int>(meta[4]);
        const std::size_t N = Circulant::ipow(g.n, g.d);
        g.samples.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            double re, im;
            is.read(reinterpret_cast<char*>(&re), sizeof(double));
            is.read(reinterpret_cast<char*>(&im), sizeof(double));
            if (!is) throw IoError("truncated binary grid: " + path);
            g.samples[i] = cplx(re, im);
        }
        return g;
    }

    // text format
    is.close();
    std::ifstream ts(path);
    std::string line;
    while (std::getline(ts, line)) {
        if (line.rfind("# d=", 0) == 0) {
            std::istringstream hs(line.substr(2));
            std::string tok;
            while (hs >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "d") g.d = std::stoi(val);
                else if (key == "n") g.n = std::stoi(val);
                else if (key == "k") g.k = std::stoi(val);
                else if (key == "component" && val.size() == 2) {
                    g.a = val[0] - '0';
                    g.b = val[1] - '0';
                }
            }
        } else if (!line.empty() && line[0] != '#') {
            std::istringstream ls(line);
            std::vector<double> vals;
            double v;
            while (ls >> v) vals.push_back(v);
            if (vals.size() < 3)
                throw IoError("malformed grid row in " + path);
            g.samples.emplace_back(vals[vals.size() - 2], vals.back());
        }
    }
    if (g.d == 0 || g.n == 0) throw IoError("missing grid header in " + path);
    if (g.samples.size() != Circulant::ipow(g.n, g.d))
        throw IoError("grid size mismatch in " + path);
    return g;
}

/// Recovers spline coefficients from cell-center samples by solving the
/// circulant collocation system. For degrees >= 1 on an even grid the
/// midpoint collocation operator has a null mode at the Nyquist frequency;
/// it is pruned, dropping only the coefficient oscillation that cell-center
/// samples cannot see.
inline std::vector<cplx> coefficients_from_samples(
    const SplineBasis& basis, const std::vector<cplx>& samples) {
    if (samples.size() != basis.size())
        throw IoError("sample count does not match basis grid");
    const int n = basis.n;
    const double h = basis.h();
    std::vector<cplx> gen(basis.size());
    if (basis.d == 1) {
        for (int j = 0; j < n; ++j)
            gen[j] = basis.eval_phi1_1d((j + 0.5) * h);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gen[static_cast<std::size_t>(i) * n + j] =
                    basis.eval_phi1_1d((i + 0.5) * h) *
                    basis.eval_phi1_1d((j + 0.5) * h);
    }
    const Circulant colloc(basis.d, n, std::move(gen));
    return colloc.solve_pruned(samples);
}

inline void write_report(const std::string& path, const SolveReport& rep) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << std::setprecision(17);
    os << "converged: " << (rep.converged ? "true" : "false") << '\n';
    os << "trivial: " << (rep.trivial ? "true" : "false") << '\n';
    os << "iterations: " << rep.iterations << '\n';
    os << "final_residual: " << rep.final_residual << '\n';
    os << "discrete_residual: " << rep.discrete_residual << '\n';
    os << "solution_norm: " << rep.solution_norm << '\n';
    os << "classification: " << rep.classification << '\n';
    os << "perturbed_nodes: " << rep.perturbed_nodes << '\n';
    os << "nodal_points:\n";
    for (const auto& p : rep.nodal_points)
        os << "  " << p[0] << ' ' << p[1] << '\n';
    os << "residual_history:\n";
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
        os << "  " << i + 1 << ' ' << rep.residual_history[i] << '\n';
    if (!os) throw IoError("write failed: " + path);
}

inline void write_spectrum(const std::string& path, const Circulant& op) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "# eigenvalues of the kernel Galerkin operator, DFT order\n";
    os << std::setprecision(17);
    for (const auto& e : op.spectrum())
        os << e.real() << ' ' << e.imag() << '\n';
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace bcs::io
