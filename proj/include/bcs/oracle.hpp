#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bcs/quadrature.hpp"

namespace bcs::oracle {

/// Complete elliptic integral of the first kind, K(m) for m < 1, via the
/// arithmetic-geometric mean: K(m) = pi / (2 AGM(1, sqrt(1-m))). The real
/// AGM is valid for all m < 1, including the large negative arguments
/// needed by phi below.
inline double elliptic_K(double m) {
    if (m >= 1.0)
        throw std::domain_error("elliptic_K: requires m < 1");
    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    for (int i = 0; i < 200; ++i) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        if (std::abs(a - b) < 1e-17 * a) break;
    }
    return M_PI / (2.0 * a);
}

/// phi(s) = integral over the torus of s / sqrt(xi^2 + s^2).
/// d=1 uses the closed form
///   phi(s) = (1/pi) [ K(-1/s^2) + s/sqrt(1+s^2) K(1/(1+s^2)) ];
/// d>=2 falls back to panel-doubling tensor Gauss quadrature.
/// phi(0) = 0 by continuity; 0 <= phi < 1, strictly increasing.
inline double phi(double s, int d = 1) {
    if (s < 0.0) throw std::domain_error("phi: s must be >= 0");
    if (s == 0.0) return 0.0;
    if (d == 1) {
        return (elliptic_K(-1.0 / (s * s)) +
                s / std::sqrt(1.0 + s * s) *
                    elliptic_K(1.0 / (1.0 + s * s))) /
               M_PI;
    }
    if (d == 2) {
        // inner integral in y2 via the 1D reduction is not available
        // (xi couples the coordinates additively), so integrate directly
        auto inner = [&](double y1) {
            const double c1 = std::cos(2.0 * M_PI * y1);
            return integrate_adaptive(
                [&](double y2) {
                    const double xi = -c1 - std::cos(2.0 * M_PI * y2);
                    return s / std::sqrt(xi * xi + s * s);
                },
                0.0, 1.0, 1e-11);
        };
        return integrate_adaptive(inner, 0.0, 1.0, 1e-10);
    }
    throw std::domain_error("phi: d must be 1 or 2");
}

struct ScalarFixedPoint {
    double C1;
    double s_star;
    double bracket_lo;
    double bracket_hi;
    double residual;  // |s - C1 phi(s)| at s_star
};

/// Nontrivial root of s = C1 phi(s). The lower bracket end is seeded from
/// the small-coupling asymptotic s*(C1) ~ 4 exp(-pi/(2 C1)), which keeps
/// the exponentially small root out of the underflow region; bisection is
/// followed by secant polish.
inline ScalarFixedPoint solve_scalar_constant(double C1, int d = 1) {
    if (C1 <= 0.0)
        throw std::domain_error("solve_scalar_constant: requires C1 > 0");
    auto psi = [&](double s) { return s - C1 * phi(s, d); };

    double lo = 0.1 * 4.0 * std::exp(-M_PI / (2.0 * C1));
    double hi = C1;
    if (psi(lo) >= 0.0) lo = std::min(1e-300, lo);  // pathological couplings
    // psi(lo) < 0 since phi(s) ~ -(2/pi) s ln s dominates s/C1 near 0;
    // psi(C1) > 0 since phi < 1
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (psi(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * hi) break;
    }
    double s = 0.5 * (lo + hi);
    // secant polish to push |psi| toward machine precision
    double s_prev = lo, f_prev = psi(s_prev), fs = psi(s);
    for (int i = 0; i < 8 && fs != f_prev; ++i) {
        const double s_next = s - fs * (s - s_prev) / (fs - f_prev);
        if (!std::isfinite(s_next) || s_next <= 0.0) break;
        s_prev = s;
        f_prev = fs;
        s = s_next;
        fs = psi(s);
    }
    return {C1, s, lo, hi, std::abs(fs)};
}

/// The four singular-value patterns of constant 2x2 matrix solutions,
/// diag(sigma_1, sigma_2) with sigma_j in {0, s*}; with the fermionic
/// antisymmetry constraint only the zero solution and the antisymmetric
/// [[0, s*], [-s*, 0]] family (up to phase) survive.
struct ConstantMatrixPattern {
    double sigma1, sigma2;
    bool antisymmetric_form;  // realized as [[0, s], [-s, 0]]
};

inline std::vector<ConstantMatrixPattern> classify_constant_matrix(
    double C1, bool enforce_antisymmetry, int d = 1) {
    const double s = solve_scalar_constant(C1, d).s_star;
    if (enforce_antisymmetry) {
        return {{0.0, 0.0, false}, {s, s, true}};
    }
    return {{0.0, 0.0, false},
            {s, 0.0, false},
            {0.0, s, false},
            {s, s, false}};
}

}  // namespace bcs::oracle
