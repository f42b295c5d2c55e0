#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "bcs/circulant.hpp"
#include "bcs/kernel.hpp"
#include "bcs/lattice.hpp"
#include "bcs/nonlinearity.hpp"
#include "bcs/splines.hpp"

namespace bcs {

struct SolverConfig {
    double tol = 1e-8;
    int max_iter = 1000;
    double alpha = 0.5;       // mixing parameter in (0, 1]
    int q = 0;                // quadrature order; 0 means mu + 2
    bool enforce_antisymmetry = false;
    double floor = 1e-14;     // guards the relative criterion near zero

    void validate() const {
        if (tol <= 0.0) throw std::invalid_argument("solver: tol must be > 0");
        if (alpha <= 0.0 || alpha > 1.0)
            throw std::invalid_argument("solver: alpha must be in (0, 1]");
        if (max_iter < 1)
            throw std::invalid_argument("solver: max_iter must be >= 1");
    }

    int quad_order(const SplineBasis& basis) const {
        return q > 0 ? q : basis.mu + 2;
    }
};

struct SolveReport {
    bool converged = false;
    bool trivial = false;  // converged to the zero fixed point
    int iterations = 0;
    std::vector<double> residual_history;  // relative step norms per iteration
    double final_residual = 0.0;           // last history entry
    double discrete_residual = 0.0;        // ||M f - A M^-1 G(f) f|| / ||M f||
    double solution_norm = 0.0;            // L2 norm of the gap
    std::string classification = "zero";
    std::vector<std::array<double, 2>> nodal_points;
    int perturbed_nodes = 0;
};

namespace detail {

inline double l2_norm_sq(const Circulant& mass, const cplx* u, std::size_t N) {
    std::vector<cplx> v(u, u + N);
    const auto mv = mass.matvec(v);
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += (std::conj(v[i]) * mv[i]).real();
    return std::max(0.0, s);
}

inline double field_l2_norm(const Circulant& mass, const GapField& f) {
    double s = 0.0;
    for (int a = 0; a < f.k; ++a)
        for (int b = 0; b < f.k; ++b)
            s += l2_norm_sq(mass, f.component(a, b), f.grid_size());
    return std::sqrt(s);
}

inline double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace detail

/// Initial guesses. The zero field is always a fixed point, so nonzero
/// seeds are required to reach the superconducting branch; the d-wave seed
/// is compatible with the swap-antisymmetric symmetry class.
inline GapField make_initial_field(const SplineBasis& basis, int k,
                                   const std::string& kind,
                                   std::uint64_t seed = 0) {
    GapField f(basis, k);
    const std::size_t N = basis.size();
    const double amp = 0.1;
    if (kind == "constant") {
        if (k == 1) {
            std::fill(f.component(0, 0), f.component(0, 0) + N, cplx(amp));
        } else {
            std::fill(f.component(0, 1), f.component(0, 1) + N, cplx(amp));
            std::fill(f.component(1, 0), f.component(1, 0) + N, cplx(-amp));
        }
    } else if (kind == "dwave-seed") {
        if (basis.d != 2)
            throw std::invalid_argument("solver: dwave-seed requires d = 2");
        const double h = basis.h();
        std::vector<cplx> seed_vals(N);
        for (int i = 0; i < basis.n; ++i)
            for (int j = 0; j < basis.n; ++j)
                seed_vals[static_cast<std::size_t>(i) * basis.n + j] =
                    amp * (std::cos(2.0 * M_PI * i * h) -
                           std::cos(2.0 * M_PI * j * h));
        if (k == 1) {
            std::copy(seed_vals.begin(), seed_vals.end(), f.component(0, 0));
        } else {
            // F = [[0, f(x)], [-f(-x), 0]]; the seed is even in x
            for (std::size_t i = 0; i < N; ++i) {
                f.component(0, 1)[i] = seed_vals[i];
                f.component(1, 0)[i] = -seed_vals[i];
            }
        }
    } else if (kind == "random") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-amp, amp);
        for (auto& c : f.coeffs) c = cplx(u(rng), u(rng));
    } else {
        throw std::invalid_argument("solver: unknown init kind '" + kind + "'");
    }
    return f;
}

/// Relative discrete residual of the fixed point,
///   max over components of ||M f - A M^-1 <g[F], phi>|| / ||M f||.
/// The zero field is a fixed point by convention and returns 0.
inline double residual(const Lattice& lat, const SplineBasis& basis,
                       const KernelSpec& spec, const GapField& F, int q,
                       const Circulant* mass_in = nullptr,
                       const Circulant* A_in = nullptr,
                       bool* trivial_out = nullptr) {
    const std::size_t N = basis.size();
    if (F.max_abs() < 1e-300) {
        if (trivial_out) *trivial_out = true;
        return 0.0;
    }
    if (trivial_out) *trivial_out = false;
    const Circulant mass = mass_in ? *mass_in : basis.mass_matrix();
    const Circulant A = A_in ? *A_in : assemble_A(basis, spec);
    const GapField g = apply_G_map(lat, basis, F, q, mass);

    double worst = 0.0;
    double max_den = 0.0;
    std::vector<double> nums(static_cast<std::size_t>(F.k) * F.k);
    std::vector<double> dens(nums.size());
    for (int a = 0; a < F.k; ++a)
        for (int b = 0; b < F.k; ++b) {
            std::vector<cplx> fc(F.component(a, b), F.component(a, b) + N);
            std::vector<cplx> gc(g.component(a, b), g.component(a, b) + N);
            const auto mf = mass.matvec(fc);
            const auto ag = A.matvec(gc);
            std::vector<cplx> r(N);
            for (std::size_t i = 0; i < N; ++i) r[i] = mf[i] - ag[i];
            nums[a * F.k + b] = detail::vec_norm(r);
            dens[a * F.k + b] = detail::vec_norm(mf);
            max_den = std::max(max_den, dens[a * F.k + b]);
        }
    for (std::size_t c = 0; c < nums.size(); ++c) {
        if (dens[c] > 1e-14 * max_den && dens[c] > 0.0)
            worst = std::max(worst, nums[c] / dens[c]);
    }
    return worst;
}

/// Classifies the scalar gap component (F_{01} for k=2, F_{00} for k=1)
/// by its symmetry under exchange of the momentum components.
inline std::string classify_symmetry(const GapField& F,
                                     const SplineBasis& basis,
                                     double eps_sym = 1e-6,
                                     double tol_zero = 1e-10) {
    const cplx* comp = F.k == 1 ? F.component(0, 0) : F.component(0, 1);
    const auto samples = sample_on_grid(basis, comp, 0.0);
    double fmax = 0.0;
    for (const auto& s : samples) fmax = std::max(fmax, std::abs(s));
    if (fmax < tol_zero) return "zero";

    if (basis.d == 1) {
        double dev = 0.0;
        for (const auto& s : samples) dev = std::max(dev, std::abs(s - samples[0]));
        return dev < eps_sym * fmax ? "constant" : "other";
    }

    const int n = basis.n;
    double sym_dev = 0.0, asym_dev = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx a = samples[static_cast<std::size_t>(i) * n + j];
            const cplx b = samples[static_cast<std::size_t>(j) * n + i];
            sym_dev = std::max(sym_dev, std::abs(a - b));
            asym_dev = std::max(asym_dev, std::abs(a + b));
        }
    if (sym_dev < eps_sym * fmax) return "s-wave";
    if (asym_dev < eps_sym * fmax) return "d-wave";
    return "other";
}

/// Grid points (cell centers) that are simultaneously near the Fermi
/// surface and near a zero of the gap. Reporting aid only.
inline std::vector<std::array<double, 2>> find_nodal_points(
    const Lattice& lat, const SplineBasis& basis, const GapField& F,
    double f_tol_rel = 1e-3, double xi_tol = -1.0) {
    if (xi_tol < 0.0) xi_tol = 4.0 * M_PI * basis.h();
    const cplx* comp = F.k == 1 ? F.component(0, 0) : F.component(0, 1);
    const auto samples = sample_on_grid(basis, comp, 0.5);
    double fmax = 0.0;
    for (const auto& s : samples) fmax = std::max(fmax, std::abs(s));

    std::vector<std::array<double, 2>> pts;
    const double h = basis.h();
    const int n = basis.n;
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        std::array<double, 2> x{0.0, 0.0};
        if (basis.d == 1) {
            x[0] = (idx + 0.5) * h;
        } else {
            x[0] = (idx / n + 0.5) * h;
            x[1] = (idx % n + 0.5) * h;
        }
        if (std::abs(samples[idx]) < f_tol_rel * fmax &&
            std::abs(lat.dispersion(x)) < xi_tol)
            pts.push_back(x);
    }
    return pts;
}

/// Damped fixed-point (Picard) iteration for the coupled system
///   M f = A g,   M g = G(f) f,
/// all linear solves through the circulant DFT diagonalization. The
/// antisymmetry projector is applied to every iterate when enabled.
inline std::pair<GapField, SolveReport> iterate(const Lattice& lat,
                                                const SplineBasis& basis,
                                                const KernelSpec& spec,
                                                const SolverConfig& cfg,
                                                GapField f) {
    cfg.validate();
    const int q = cfg.quad_order(basis);
    const Circulant mass = basis.mass_matrix();
    const Circulant A = assemble_A(basis, spec);
    const std::size_t N = basis.size();

    SolveReport report;

    // A = 0 (both couplings off) maps everything to zero in one step
    if (A.max_abs_eig() == 0.0) {
        GapField zero(basis, f.k);
        report.converged = true;
        report.trivial = true;
        report.iterations = 1;
        report.residual_history = {0.0};
        return {std::move(zero), report};
    }

    NodalPolicyLog nodal_log;
    for (int t = 0; t < cfg.max_iter; ++t) {
        const GapField g = apply_G_map(lat, basis, f, q, mass, &nodal_log);

        GapField fnew(basis, f.k);
        for (int a = 0; a < f.k; ++a)
            for (int b = 0; b < f.k; ++b) {
                std::vector<cplx> gc(g.component(a, b), g.component(a, b) + N);
                const auto fraw = mass.solve(A.matvec(gc));
                cplx* dst = fnew.component(a, b);
                const cplx* src = f.component(a, b);
                for (std::size_t i = 0; i < N; ++i)
                    dst[i] = (1.0 - cfg.alpha) * src[i] + cfg.alpha * fraw[i];
            }
        if (cfg.enforce_antisymmetry && f.k == 2)
            fnew = project_antisymmetric(fnew);

        GapField diff(basis, f.k);
        for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            diff.coeffs[i] = fnew.coeffs[i] - f.coeffs[i];
        const double step = detail::field_l2_norm(mass, diff);
        const double fnorm = detail::field_l2_norm(mass, fnew);
        report.residual_history.push_back(step /
                                          std::max(fnorm, cfg.floor));
        f = std::move(fnew);
        report.iterations = t + 1;

        if (fnorm <= cfg.floor) {  // collapsed to the trivial solution
            report.converged = true;
            report.trivial = true;
            break;
        }
        if (step <= cfg.tol * std::max(fnorm, cfg.floor)) {
            // confirm against the true fixed-point residual before stopping
            const double res = residual(lat, basis, spec, f, q, &mass, &A);
            if (res <= 5.0 * cfg.tol) {
                report.converged = true;
                report.discrete_residual = res;
                break;
            }
        }
    }

    report.final_residual = report.residual_history.empty()
                                ? 0.0
                                : report.residual_history.back();
    if (report.discrete_residual == 0.0 && !report.trivial)
        report.discrete_residual =
            residual(lat, basis, spec, f, q, &mass, &A, &report.trivial);
    report.solution_norm = detail::field_l2_norm(mass, f);
    report.classification = classify_symmetry(f, basis);
    report.nodal_points = find_nodal_points(lat, basis, f);
    report.perturbed_nodes = nodal_log.perturbed_nodes;
    return {std::move(f), report};
}

}  // namespace bcs
