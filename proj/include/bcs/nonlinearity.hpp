#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bcs/circulant.hpp"
#include "bcs/lattice.hpp"
#include "bcs/quadrature.hpp"
#include "bcs/splines.hpp"

namespace bcs {

/// Raised when the nonlinear map is evaluated at a point where both the
/// dispersion and the gap vanish (or, for assembly, where the integrand
/// is non-integrable on a whole cell).
class NodalSingularityError : public std::runtime_error {
public:
    explicit NodalSingularityError(const std::string& what)
        : std::runtime_error(what) {}
};

/// Scalar branch of the BCS nonlinearity: g = f / sqrt(xi^2 + |f|^2).
inline cplx g_scalar(cplx f, double xi) {
    const double denom_sq = xi * xi + std::norm(f);
    if (denom_sq == 0.0)
        throw NodalSingularityError("g_scalar: f and xi both vanish");
    return f / std::sqrt(denom_sq);
}

/// 2x2 complex matrix, row-major.
using Mat2 = std::array<cplx, 4>;

inline Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 mat2_adjoint(const Mat2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]),
            std::conj(a[3])};
}

/// Singular values of a 2x2 complex matrix (descending), from the
/// eigenvalues of F*F in closed form.
inline std::array<double, 2> mat2_singular_values(const Mat2& f) {
    const Mat2 h = mat2_mul(mat2_adjoint(f), f);
    const double tr = h[0].real() + h[3].real();
    const double det = (h[0] * h[3] - h[1] * h[2]).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double l1 = std::max(0.0, tr / 2.0 + disc);
    const double l2 = std::max(0.0, tr / 2.0 - disc);
    return {std::sqrt(l1), std::sqrt(l2)};
}

/// Matrix branch: G = F (xi^2 I + F*F)^{-1/2} via the closed-form square
/// root of a Hermitian positive definite 2x2 matrix,
///   sqrt(H) = (H + sqrt(det H) I) / sqrt(tr H + 2 sqrt(det H)).
inline Mat2 g_matrix(const Mat2& f, double xi,
                     double eps_nodal = 1e-300) {
    Mat2 h = mat2_mul(mat2_adjoint(f), f);
    h[0] += xi * xi;
    h[3] += xi * xi;
    const double tr = h[0].real() + h[3].real();
    const double det = std::max(0.0, (h[0] * h[3] - h[1] * h[2]).real());
    const double sd = std::sqrt(det);
    if (sd <= eps_nodal || tr + 2.0 * sd <= 0.0)
        throw NodalSingularityError(
            "g_matrix: xi^2 I + F*F is singular (nodal point)");
    const double s = std::sqrt(tr + 2.0 * sd);
    // inverse of sqrt(H): adjugate over determinant, det(sqrt H) = sd
    const Mat2 sq = {(h[0] + sd) / s, h[1] / s, h[2] / s, (h[3] + sd) / s};
    const Mat2 inv = {sq[3] / sd, -sq[1] / sd, -sq[2] / sd, sq[0] / sd};
    return mat2_mul(f, inv);
}

/// Spline-coefficient representation of the (k x k matrix-valued) gap.
/// Component (a, b) occupies the slice [(a*k+b)*N, (a*k+b+1)*N) of coeffs,
/// flattened row-major over the grid.
struct GapField {
    SplineBasis basis;
    int k;
    std::vector<cplx> coeffs;

    GapField(const SplineBasis& b, int k_)
        : basis(b), k(k_), coeffs(static_cast<std::size_t>(k_) * k_ * b.size(),
                                  0.0) {
        if (k < 1 || k > 2)
            throw std::invalid_argument("gap field: k must be 1 or 2");
    }

    std::size_t grid_size() const { return basis.size(); }

    cplx* component(int a, int b) {
        return coeffs.data() + static_cast<std::size_t>(a * k + b) * grid_size();
    }
    const cplx* component(int a, int b) const {
        return coeffs.data() + static_cast<std::size_t>(a * k + b) * grid_size();
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs) m = std::max(m, std::abs(c));
        return m;
    }
};

namespace detail {

/// Flattened index of the grid reflection induced by x -> -x:
/// per dimension i -> (n - i) mod n (0-based).
inline std::size_t reflect_index(int d, int n, std::size_t idx) {
    const std::size_t nn = static_cast<std::size_t>(n);
    if (d == 1) return (nn - idx) % nn;
    std::size_t i = idx / nn, j = idx % nn;
    return ((nn - i) % nn) * nn + (nn - j) % nn;
}

/// Evaluate a scalar spline series at x using only the active basis.
inline cplx eval_series(const SplineBasis& basis, const cplx* coeffs,
                        const std::array<double, 2>& x) {
    cplx v = 0.0;
    const auto a0 = basis.active_basis_1d(x[0]);
    if (basis.d == 1) {
        for (const auto& [l, w] : a0) v += coeffs[l - 1] * w;
    } else {
        const auto a1 = basis.active_basis_1d(x[1]);
        for (const auto& [l0, w0] : a0)
            for (const auto& [l1, w1] : a1)
                v += coeffs[static_cast<std::size_t>(l0 - 1) * basis.n +
                            (l1 - 1)] *
                     (w0 * w1);
    }
    return v;
}

}  // namespace detail

/// Fermionic antisymmetry projector for k=2 fields, acting on coefficients:
///   P(F)_{ab}(l) = (F_{ab}(l) - F_{ba}(rho(l))) / 2,
/// where rho is the index reversal induced by x -> -x. Idempotent.
inline GapField project_antisymmetric(const GapField& f) {
    if (f.k != 2)
        throw std::invalid_argument("project_antisymmetric: requires k = 2");
    GapField out(f.basis, 2);
    const std::size_t N = f.grid_size();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const cplx* ab = f.component(a, b);
            const cplx* ba = f.component(b, a);
            cplx* dst = out.component(a, b);
            for (std::size_t i = 0; i < N; ++i) {
                const std::size_t r =
                    detail::reflect_index(f.basis.d, f.basis.n, i);
                dst[i] = 0.5 * (ab[i] - ba[r]);
            }
        }
    return out;
}

/// Periodic banded matrix with the mass-matrix sparsity pattern:
/// row k has nonzeros at columns l = k + o (mod n per dimension) with
/// per-dimension offsets o in [-w, w].
struct PeriodicBanded {
    int d, n, w;
    std::vector<double> values;  // [row][band], band row-major over offsets

    PeriodicBanded(int d_, int n_, int w_)
        : d(d_), n(n_), w(w_),
          values(Circulant::ipow(n_, d_) * band_size(), 0.0) {}

    std::size_t band_size() const {
        return Circulant::ipow(2 * w + 1, d);
    }
    std::size_t rows() const { return Circulant::ipow(n, d); }

    double& at(std::size_t row, int o1, int o2 = 0) {
        const std::size_t b =
            d == 1 ? static_cast<std::size_t>(o1 + w)
                   : static_cast<std::size_t>(o1 + w) * (2 * w + 1) + (o2 + w);
        return values[row * band_size() + b];
    }
    double at(std::size_t row, int o1, int o2 = 0) const {
        return const_cast<PeriodicBanded*>(this)->at(row, o1, o2);
    }

    std::size_t col_of(std::size_t row, int o1, int o2 = 0) const {
        if (d == 1) return (row + n + o1) % n;
        const std::size_t nn = static_cast<std::size_t>(n);
        const std::size_t i = row / nn, j = row % nn;
        return ((i + n + o1) % nn) * nn + (j + n + o2) % nn;
    }

    std::vector<cplx> matvec(const std::vector<cplx>& v) const {
        std::vector<cplx> out(rows(), 0.0);
        for (std::size_t r = 0; r < rows(); ++r) {
            cplx s = 0.0;
            for (int o1 = -w; o1 <= w; ++o1) {
                if (d == 1) {
                    s += at(r, o1) * v[col_of(r, o1)];
                } else {
                    for (int o2 = -w; o2 <= w; ++o2)
                        s += at(r, o1, o2) * v[col_of(r, o1, o2)];
                }
            }
            out[r] = s;
        }
        return out;
    }
};

namespace detail {

struct QuadContext {
    GaussLegendre rule;
    int q;
    explicit QuadContext(int q_) : rule(q_), q(q_) {}
};

/// Visits every Gauss node of every mesh cell in a fixed order.
/// fn(x, weight, cell_flat_index, node_index_within_cell).
template <typename Fn>
void for_each_quad_node(const SplineBasis& basis, const QuadContext& qc,
                        Fn&& fn) {
    const double h = basis.h();
    const int n = basis.n;
    const int q = qc.q;
    if (basis.d == 1) {
        for (int c = 0; c < n; ++c)
            for (int i = 0; i < q; ++i) {
                const double x = (c + 0.5 + 0.5 * qc.rule.nodes[i]) * h;
                fn(std::array<double, 2>{x, 0.0},
                   0.5 * h * qc.rule.weights[i],
                   static_cast<std::size_t>(c), i);
            }
    } else {
        for (int c1 = 0; c1 < n; ++c1)
            for (int c2 = 0; c2 < n; ++c2) {
                const std::size_t cell = static_cast<std::size_t>(c1) * n + c2;
                int node = 0;
                for (int i = 0; i < q; ++i)
                    for (int j = 0; j < q; ++j, ++node) {
                        const std::array<double, 2> x = {
                            (c1 + 0.5 + 0.5 * qc.rule.nodes[i]) * h,
                            (c2 + 0.5 + 0.5 * qc.rule.nodes[j]) * h};
                        fn(x,
                           0.25 * h * h * qc.rule.weights[i] *
                               qc.rule.weights[j],
                           cell, node);
                    }
            }
    }
}

}  // namespace detail

/// Records how assembly handled near-nodal quadrature nodes.
struct NodalPolicyLog {
    int perturbed_nodes = 0;
};

/// Nonlinear Galerkin matrix for a scalar gap component:
///   G(f)_{k,l} = int phi_l(x) phi_k(x) / sqrt(xi^2(x) + |f(x)|^2) dx,
/// by per-cell Gauss quadrature with q points per dimension. Symmetric,
/// same band structure as the mass matrix, not circulant.
///
/// A quadrature node where the denominator vanishes to machine precision
/// is perturbed by h*1e-9 and logged. A cell where xi changes sign while
/// |f| stays below eps_degenerate throughout is a genuine non-integrable
/// singularity and raises NodalSingularityError.
inline PeriodicBanded assemble_G(const SplineBasis& basis, const Lattice& lat,
                                 const cplx* fcoeffs, int q,
                                 NodalPolicyLog* log = nullptr,
                                 double eps_degenerate = 1e-12) {
    PeriodicBanded G(basis.d, basis.n, basis.mu);
    const detail::QuadContext qc(q);
    const double h = basis.h();
    const int n = basis.n;

    // per-cell singularity screen
    std::size_t current_cell = static_cast<std::size_t>(-1);
    double cell_xi_min = 0.0, cell_xi_max = 0.0, cell_fmax = 0.0;
    auto flush_cell = [&]() {
        if (current_cell == static_cast<std::size_t>(-1)) return;
        if (cell_xi_min < 0.0 && cell_xi_max > 0.0 &&
            cell_fmax < eps_degenerate)
            throw NodalSingularityError(
                "assemble_G: gap vanishes on a cell crossing the Fermi "
                "surface; integrand is non-integrable");
    };

    detail::for_each_quad_node(basis, qc, [&](std::array<double, 2> x,
                                              double wq, std::size_t cell,
                                              int) {
        if (cell != current_cell) {
            flush_cell();
            current_cell = cell;
            cell_xi_min = 1e300;
            cell_xi_max = -1e300;
            cell_fmax = 0.0;
        }
        double xi = lat.dispersion(x);
        cplx fx = detail::eval_series(basis, fcoeffs, x);
        double denom_sq = xi * xi + std::norm(fx);
        if (denom_sq < 1e-300) {
            x[0] += h * 1e-9;
            xi = lat.dispersion(x);
            fx = detail::eval_series(basis, fcoeffs, x);
            denom_sq = xi * xi + std::norm(fx);
            if (denom_sq < 1e-300)
                throw NodalSingularityError(
                    "assemble_G: quadrature node sits on a nodal point");
            if (log) ++log->perturbed_nodes;
        }
        cell_xi_min = std::min(cell_xi_min, xi);
        cell_xi_max = std::max(cell_xi_max, xi);
        cell_fmax = std::max(cell_fmax, std::abs(fx));
        const double weight = wq / std::sqrt(denom_sq);

        const auto a0 = basis.active_basis_1d(x[0]);
        if (basis.d == 1) {
            for (const auto& [lk, vk] : a0)
                for (const auto& [ll, vl] : a0) {
                    int o = ll - lk;
                    if (o > n / 2) o -= n;
                    if (o < -n / 2) o += n;
                    G.at(lk - 1, o) += weight * vk * vl;
                }
        } else {
            const auto a1 = basis.active_basis_1d(x[1]);
            // tensor-product active set
            for (const auto& [k0, vk0] : a0)
                for (const auto& [k1, vk1] : a1) {
                    const std::size_t row =
                        static_cast<std::size_t>(k0 - 1) * n + (k1 - 1);
                    const double vk = vk0 * vk1;
                    for (const auto& [l0, vl0] : a0)
                        for (const auto& [l1, vl1] : a1) {
                            int o1 = l0 - k0, o2 = l1 - k1;
                            if (o1 > n / 2) o1 -= n;
                            if (o1 < -n / 2) o1 += n;
                            if (o2 > n / 2) o2 -= n;
                            if (o2 < -n / 2) o2 += n;
                            G.at(row, o1, o2) += weight * vk * vl0 * vl1;
                        }
                }
        }
    });
    flush_cell();
    return G;
}

/// One application of the nonlinear map in Galerkin form: returns g with
/// M g = <g[F], phi_k>. The k=1 path goes through assemble_G (M g = G(f) f);
/// the k=2 path evaluates g_matrix pointwise at the quadrature nodes and
/// tests against the basis directly. Both agree on antisymmetric-reduced
/// fields.
inline GapField apply_G_map(const Lattice& lat, const SplineBasis& basis,
                            const GapField& F, int q, const Circulant& mass,
                            NodalPolicyLog* log = nullptr) {
    GapField g(basis, F.k);
    const std::size_t N = basis.size();
    if (F.k == 1) {
        const PeriodicBanded G = assemble_G(basis, lat, F.component(0, 0), q,
                                            log);
        std::vector<cplx> f(F.component(0, 0), F.component(0, 0) + N);
        const auto rhs = G.matvec(f);
        const auto sol = mass.solve(rhs);
        std::copy(sol.begin(), sol.end(), g.component(0, 0));
        return g;
    }

    const detail::QuadContext qc(q);
    const double h = basis.h();
    std::array<std::vector<cplx>, 4> rhs;
    for (auto& r : rhs) r.assign(N, 0.0);

    detail::for_each_quad_node(basis, qc, [&](std::array<double, 2> x,
                                              double wq, std::size_t, int) {
        double xi = lat.dispersion(x);
        Mat2 fx;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                fx[a * 2 + b] =
                    detail::eval_series(basis, F.component(a, b), x);
        Mat2 gx;
        try {
            gx = g_matrix(fx, xi);
        } catch (const NodalSingularityError&) {
            x[0] += h * 1e-9;
            xi = lat.dispersion(x);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    fx[a * 2 + b] =
                        detail::eval_series(basis, F.component(a, b), x);
            gx = g_matrix(fx, xi);
            if (log) ++log->perturbed_nodes;
        }

        const auto a0 = basis.active_basis_1d(x[0]);
        if (basis.d == 1) {
            for (const auto& [l, v] : a0)
                for (int c = 0; c < 4; ++c)
                    rhs[c][l - 1] += wq * v * gx[c];
        } else {
            const auto a1 = basis.active_basis_1d(x[1]);
            for (const auto& [l0, v0] : a0)
                for (const auto& [l1, v1] : a1) {
                    const std::size_t row =
                        static_cast<std::size_t>(l0 - 1) * basis.n + (l1 - 1);
                    const double v = wq * v0 * v1;
                    for (int c = 0; c < 4; ++c) rhs[c][row] += v * gx[c];
                }
        }
    });

    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const auto sol = mass.solve(rhs[a * 2 + b]);
            std::copy(sol.begin(), sol.end(), g.component(a, b));
        }
    return g;
}

/// Samples a scalar coefficient slice on the n^d grid at offset*h from the
/// nodes (offset 0: nodes x_l; offset 0.5: cell centers). The sampling map
/// is circulant, so this is a single matvec.
inline std::vector<cplx> sample_on_grid(const SplineBasis& basis,
                                        const cplx* coeffs, double offset) {
    const int n = basis.n;
    const double h = basis.h();
    std::vector<cplx> gen(basis.size());
    if (basis.d == 1) {
        for (int j = 0; j < n; ++j)
            gen[j] = basis.eval_phi1_1d((j + offset) * h);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gen[static_cast<std::size_t>(i) * n + j] =
                    basis.eval_phi1_1d((i + offset) * h) *
                    basis.eval_phi1_1d((j + offset) * h);
    }
    const Circulant sampler(basis.d, n, std::move(gen));
    std::vector<cplx> v(coeffs, coeffs + basis.size());
    return sampler.matvec(v);
}

}  // namespace bcs
