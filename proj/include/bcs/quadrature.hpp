#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bcs {

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_q with
/// the usual cosine initial guesses. Accurate to machine precision for
/// the small orders used here.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int q) {
        if (q < 1) throw std::invalid_argument("quadrature: order must be >= 1");
        nodes.resize(q);
        weights.resize(q);
        for (int i = 0; i < q; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                // P_q(x) and P'_q(x) by the three-term recurrence
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= q; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = q * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

/// Integral of f over [a, b] with a composite Gauss rule: `panels` equal
/// subintervals, q points each.
inline double integrate_panels(const std::function<double(double)>& f,
                               double a, double b, int panels, int q) {
    const GaussLegendre rule(q);
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * w;
        for (int i = 0; i < q; ++i)
            sum += rule.weights[i] * f(c + 0.5 * w * rule.nodes[i]);
    }
    return sum * 0.5 * w;
}

/// Panel-doubling Gauss quadrature over [a, b], refined until successive
/// values agree to tol (absolute+relative mixed).
inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b, double tol = 1e-12,
                                 int q = 12, int max_panels = 1 << 16) {
    double prev = integrate_panels(f, a, b, 1, q);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        const double cur = integrate_panels(f, a, b, panels, q);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace bcs
