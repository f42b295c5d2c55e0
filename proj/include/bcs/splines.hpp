#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcs/circulant.hpp"

namespace bcs {

namespace detail {

/// Cardinal B-spline of degree mu with support [0, mu+1], evaluated by the
/// Cox-de Boor recursion. Exact piecewise-polynomial arithmetic, no
/// quadrature involved.
inline double cardinal_bspline(int mu, double t) {
    if (t < 0.0 || t >= mu + 1.0) return 0.0;
    if (mu == 0) return 1.0;
    return (t / mu) * cardinal_bspline(mu - 1, t) +
           ((mu + 1.0 - t) / mu) * cardinal_bspline(mu - 1, t - 1.0);
}

inline double sinc(double x) {
    return x == 0.0 ? 1.0 : std::sin(x) / x;
}

}  // namespace detail

/// Periodic B-spline basis of degree mu on the uniform n-grid of the unit
/// torus, tensorized over d dimensions. Nodes are x_l = (l-1)h, h = 1/n,
/// with 1-based multi-indices l in {1..n}^d as in the defining formulas;
/// flattened storage is 0-based row-major.
struct SplineBasis {
    int d;
    int mu;
    int n;

    SplineBasis(int d_, int mu_, int n_) : d(d_), mu(mu_), n(n_) {
        if (d < 1 || d > 2) throw std::invalid_argument("splines: d must be 1 or 2");
        if (mu < 0) throw std::invalid_argument("splines: mu must be >= 0");
        if (n <= mu + 1)
            throw std::invalid_argument("splines: need n > mu + 1");
    }

    double h() const { return 1.0 / n; }
    std::size_t size() const { return Circulant::ipow(n, d); }

    /// First basis function phi_1 (centered at 0), 1-periodic, in one
    /// dimension. Support per period: |x| <= (mu+1)h/2.
    double eval_phi1_1d(double x) const {
        // reduce to [-1/2, 1/2) and evaluate the (at most one) periodic copy
        x -= std::floor(x + 0.5);
        const double t = x * n + 0.5 * (mu + 1);
        return detail::cardinal_bspline(mu, t);
    }

    /// phi_l in one dimension, l in {1..n}: phi_l(x) = phi_1(x - x_l).
    double eval_phi_1d(int ell, double x) const {
        return eval_phi1_1d(x - (ell - 1) * h());
    }

    /// Tensor-product basis function for multi-index ell (1-based).
    double eval_basis(const std::array<int, 2>& ell,
                      const std::array<double, 2>& x) const {
        double v = 1.0;
        for (int j = 0; j < d; ++j) v *= eval_phi_1d(ell[j], x[j]);
        return v;
    }

    /// Fourier coefficient of phi_1 in one dimension:
    ///   c_1(m) = h sinc^{mu+1}(pi h m)   (real)
    double fourier_coeff_phi1_1d(long m) const {
        return h() * std::pow(detail::sinc(M_PI * h() * m), mu + 1);
    }

    /// c_l(m) = c_1(m) exp(-i 2 pi h m (l-1)), tensorized over dimensions.
    std::complex<double> fourier_coeff(const std::array<int, 2>& ell,
                                       const std::array<long, 2>& m) const {
        std::complex<double> c = 1.0;
        for (int j = 0; j < d; ++j) {
            const double mag = fourier_coeff_phi1_1d(m[j]);
            const double phase = -2.0 * M_PI * h() * m[j] * (ell[j] - 1);
            c *= mag * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        return c;
    }

    /// Generating row of the 1D mass matrix: a(j) = <phi_{1+j}, phi_1>.
    /// Uses the exact identity <phi_1, phi_{1+j}> = h B_{2mu+1}(mu+1-j)
    /// (inner products of cardinal B-splines are cardinal B-spline values
    /// at integers), summed over periodic images.
    std::vector<double> mass_row_1d() const {
        std::vector<double> row(n, 0.0);
        for (int j = 0; j < n; ++j) {
            for (int shift : {j, j - n}) {
                if (std::abs(shift) <= mu)
                    row[j] += h() * detail::cardinal_bspline(2 * mu + 1,
                                                             mu + 1.0 - shift);
            }
        }
        return row;
    }

    /// Circulant mass matrix M^{(mu)}, tensor product of 1D rows for d=2.
    Circulant mass_matrix() const {
        const auto row = mass_row_1d();
        std::vector<cplx> gen(size());
        if (d == 1) {
            for (int j = 0; j < n; ++j) gen[j] = row[j];
        } else {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    gen[static_cast<std::size_t>(i) * n + j] = row[i] * row[j];
        }
        return Circulant(d, n, std::move(gen));
    }

    /// Indices (1-based, first dimension of the multi-index) and values
    /// of the basis functions that are nonzero at x, one dimension.
    /// At most mu+1 entries.
    std::vector<std::pair<int, double>> active_basis_1d(double x) const {
        std::vector<std::pair<int, double>> out;
        out.reserve(mu + 1);
        // phi_l is nonzero iff x - x_l is within (mu+1)h/2 of an integer
        const int lc = static_cast<int>(std::floor(x * n + 0.5));
        const int off = (mu + 2) / 2;
        for (int l = lc - off; l <= lc + off; ++l) {
            const int ell = ((l % n) + n) % n + 1;  // periodic, 1-based
            bool seen = false;
            for (const auto& e : out) seen = seen || e.first == ell;
            if (seen) continue;  // window can wrap on minimal grids
            const double v = eval_phi_1d(ell, x);
            if (v != 0.0) out.emplace_back(ell, v);
        }
        return out;
    }

    /// Nonzero entries of the rank-one functional mass matrix
    /// M(x)_{k,l} = phi_l(x) phi_k(x), as ((k,l) flattened 0-based, value).
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>>
    functional_mass_row(const std::array<double, 2>& x) const {
        // gather active tensor-product values
        std::vector<std::pair<std::size_t, double>> act;
        const auto a0 = active_basis_1d(x[0]);
        if (d == 1) {
            for (const auto& [l, v] : a0) act.emplace_back(l - 1, v);
        } else {
            const auto a1 = active_basis_1d(x[1]);
            for (const auto& [l0, v0] : a0)
                for (const auto& [l1, v1] : a1)
                    act.emplace_back(static_cast<std::size_t>(l0 - 1) * n +
                                         (l1 - 1),
                                     v0 * v1);
        }
        std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> out;
        out.reserve(act.size() * act.size());
        for (const auto& [k, vk] : act)
            for (const auto& [l, vl] : act)
                out.push_back({{k, l}, vk * vl});
        return out;
    }
};

}  // namespace bcs
