#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bcs/circulant.hpp"
#include "bcs/lattice.hpp"
#include "bcs/splines.hpp"

namespace bcs {

/// Interaction kernel K = C1 + C2 * (power-law lattice sum with exponent nu).
struct KernelSpec {
    double C1;
    double C2;
    double nu;

    KernelSpec(double c1, double c2, double nu_) : C1(c1), C2(c2), nu(nu_) {
        if (C1 < 0.0 || C2 < 0.0)
            throw std::invalid_argument("kernel: couplings must be nonnegative");
    }
};

/// Fourier symbol of the long-range convolution operator:
/// sigma(0) = 0, sigma(m) = |m|^{-nu} (Euclidean norm of the integer index).
inline double kernel_symbol(double nu, const std::array<long, 2>& m, int d) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) r2 += static_cast<double>(m[j]) * m[j];
    if (r2 == 0.0) return 0.0;
    return std::pow(r2, -0.5 * nu);
}

struct EpsteinValue {
    std::complex<double> value;
    double tail_bound;  // crude estimate of the omitted |z| > R part
};

/// Direct lattice sum  sum_{0 < |z| <= R} exp(-i 2 pi y.z) / |z|^nu.
/// Absolutely convergent only for nu > d; used as a reference evaluator
/// in tests, not in production assembly.
inline EpsteinValue epstein_direct(const Lattice& lat, double nu,
                                   const std::array<double, 2>& y, double R) {
    const int d = lat.dim();
    if (nu <= d)
        throw std::domain_error("epstein_direct: requires nu > d");
    if (R <= 0.0) throw std::domain_error("epstein_direct: R must be positive");

    std::complex<double> sum = 0.0;
    const long zmax = static_cast<long>(std::ceil(R));
    if (d == 1) {
        for (long z = 1; z <= zmax; ++z) {
            if (z > R) break;
            const double phase = 2.0 * M_PI * y[0] * z;
            // z and -z combined
            sum += 2.0 * std::cos(phase) * std::pow(static_cast<double>(z), -nu);
        }
    } else {
        for (long z1 = -zmax; z1 <= zmax; ++z1)
            for (long z2 = -zmax; z2 <= zmax; ++z2) {
                if (z1 == 0 && z2 == 0) continue;
                const double r2 = static_cast<double>(z1) * z1 +
                                  static_cast<double>(z2) * z2;
                if (r2 > R * R) continue;
                const double phase =
                    -2.0 * M_PI * (y[0] * z1 + y[1] * z2);
                sum += std::polar(std::pow(r2, -0.5 * nu), phase);
            }
    }
    // integral comparison bound on the non-oscillatory tail majorant
    double tail;
    if (d == 1)
        tail = 2.0 * std::pow(R, 1.0 - nu) / (nu - 1.0);
    else
        tail = 2.0 * M_PI * std::pow(R, 2.0 - nu) / (nu - 2.0);
    return {sum, tail};
}

/// Galerkin matrix of the pure long-range part,
///   b(k-l) = sum_m |c_1(m)|^2 sigma(m) exp(i 2 pi h m.(k-l)),
/// computed by folding frequencies onto residues r in {0..n-1}^d:
///   S(r) = sum_q |c_1(r+nq)|^2 sigma(r+nq),  gen = backward-DFT(S).
/// The q-window is doubled until entries stabilize below eps_tail.
inline Circulant assemble_B(const SplineBasis& basis, const KernelSpec& spec,
                            double eps_tail = 1e-12, int max_window = 64) {
    const int n = basis.n;
    const int d = basis.d;
    const std::size_t N = basis.size();

    auto fold = [&](int Q) {
        std::vector<cplx> S(N, 0.0);
        if (d == 1) {
            for (int r = 0; r < n; ++r) {
                double s = 0.0;
                for (int q = -Q; q <= Q; ++q) {
                    const long m = r + static_cast<long>(n) * q;
                    const double c = basis.fourier_coeff_phi1_1d(m);
                    s += c * c * kernel_symbol(spec.nu, {m, 0}, 1);
                }
                S[r] = s;
            }
        } else {
            // cache per-dimension coefficient magnitudes
            std::vector<std::vector<double>> c1(n);
            for (int r = 0; r < n; ++r) {
                c1[r].resize(2 * Q + 1);
                for (int q = -Q; q <= Q; ++q) {
                    const double c =
                        basis.fourier_coeff_phi1_1d(r + static_cast<long>(n) * q);
                    c1[r][q + Q] = c * c;
                }
            }
            for (int r1 = 0; r1 < n; ++r1)
                for (int r2 = 0; r2 < n; ++r2) {
                    double s = 0.0;
                    for (int q1 = -Q; q1 <= Q; ++q1) {
                        const long m1 = r1 + static_cast<long>(n) * q1;
                        for (int q2 = -Q; q2 <= Q; ++q2) {
                            const long m2 = r2 + static_cast<long>(n) * q2;
                            s += c1[r1][q1 + Q] * c1[r2][q2 + Q] *
                                 kernel_symbol(spec.nu, {m1, m2}, 2);
                        }
                    }
                    S[static_cast<std::size_t>(r1) * n + r2] = s;
                }
        }
        return S;
    };

    std::vector<cplx> S = fold(2);
    for (int Q = 4; Q <= max_window; Q *= 2) {
        std::vector<cplx> S2 = fold(Q);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            diff = std::max(diff, std::abs(S2[i] - S[i]));
            scale = std::max(scale, std::abs(S2[i]));
        }
        S = std::move(S2);
        if (diff <= eps_tail * std::max(scale, 1e-300)) break;
    }

    // gen(j) = sum_r S(r) exp(+i 2 pi r.j / n) = unnormalized backward DFT
    detail::dft_inplace(S, basis.d == 1 ? std::vector<int>{n}
                                        : std::vector<int>{n, n},
                        FFTW_BACKWARD);
    // enforce exact realness/symmetry (S is real and even up to round-off)
    for (auto& v : S) v = v.real();
    return Circulant(d, n, std::move(S));
}

/// Full kernel Galerkin matrix A = C1 h^{2d} E + C2 B, with E the all-ones
/// circulant (generator identically 1). The h^{2d} factor comes from
/// <1, phi_k> = h^d per component.
inline Circulant assemble_A(const SplineBasis& basis, const KernelSpec& spec) {
    const double h2d = std::pow(basis.h(), 2 * basis.d);
    std::vector<cplx> gen(basis.size(), spec.C1 * h2d);
    if (spec.C2 != 0.0) {
        const Circulant B = assemble_B(basis, spec);
        for (std::size_t i = 0; i < gen.size(); ++i)
            gen[i] += spec.C2 * B.generator()[i];
    }
    return Circulant(basis.d, basis.n, std::move(gen));
}

/// Weighted l2 Sobolev norm (sum <n>^{2s} |f_n|^2)^{1/2} with
/// <n> = (1+|n|^2)^{1/2}, over the supplied Fourier modes. Diagnostic.
inline double sobolev_norm(
    const std::vector<std::pair<std::array<long, 2>, std::complex<double>>>&
        modes,
    double s, int d) {
    double sum = 0.0;
    for (const auto& [m, f] : modes) {
        double r2 = 0.0;
        for (int j = 0; j < d; ++j) r2 += static_cast<double>(m[j]) * m[j];
        sum += std::pow(1.0 + r2, s) * std::norm(f);
    }
    return std::sqrt(sum);
}

}  // namespace bcs
