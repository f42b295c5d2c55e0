#include <doctest.h>

#include <cmath>

#include "bcs/oracle.hpp"
#include "bcs/quadrature.hpp"

using namespace bcs;

namespace {

// Defining integral of the complete elliptic integral of the first kind,
// K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t), for m < 1.
double elliptic_K_quadrature(double m) {
    return integrate_adaptive(
        [&](double t) {
            const double s = std::sin(t);
            return 1.0 / std::sqrt(1.0 - m * s * s);
        },
        0.0, M_PI / 2.0, 1e-13);
}

// Direct torus quadrature of phi in one dimension.
double phi_quadrature_1d(double s) {
    return integrate_adaptive(
        [&](double x) {
            const double xi = -std::cos(2.0 * M_PI * x);
            return s / std::sqrt(xi * xi + s * s);
        },
        0.0, 1.0, 1e-12);
}

}  // namespace

TEST_CASE("elliptic integral via AGM") {
    CHECK(oracle::elliptic_K(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    // classical reference value for m = 1/2
    CHECK(oracle::elliptic_K(0.5) ==
          doctest::Approx(1.8540746773013719).epsilon(1e-15));
    for (double m : {-10.0, -1.0, 0.25, 0.5, 0.9, 0.99}) {
        CHECK(oracle::elliptic_K(m) ==
              doctest::Approx(elliptic_K_quadrature(m)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(oracle::elliptic_K(1.0), std::domain_error);
}

TEST_CASE("phi in one dimension: closed form vs quadrature") {
    for (double s : {1e-3, 0.05, 0.3, 1.0, 5.0, 50.0}) {
        CHECK(oracle::phi(s, 1) ==
              doctest::Approx(phi_quadrature_1d(s)).epsilon(1e-10));
    }
}

TEST_CASE("phi: range, monotonicity, limits") {
    CHECK(oracle::phi(0.0, 1) == 0.0);
    CHECK(oracle::phi(0.0, 2) == 0.0);
    double prev = 0.0;
    for (double s : {1e-4, 1e-2, 0.1, 1.0, 10.0, 1e3}) {
        const double v = oracle::phi(s, 1);
        CHECK(v > prev);
        CHECK(v < 1.0);
        prev = v;
    }
    // saturation: phi(s) -> 1 as s -> infinity
    CHECK(oracle::phi(1e6, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(oracle::phi(1e4, 2) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(oracle::phi(-1.0, 1), std::domain_error);
    CHECK_THROWS_AS(oracle::phi(1.0, 3), std::domain_error);
}

TEST_CASE("phi: small-argument logarithmic asymptotics") {
    // phi(s) ~ (2/pi) s log(4/s) for small s in one dimension
    for (double s : {1e-4, 1e-6}) {
        const double asym = (2.0 / M_PI) * s * std::log(4.0 / s);
        CHECK(oracle::phi(s, 1) == doctest::Approx(asym).epsilon(5e-3));
    }
}

TEST_CASE("phi in two dimensions matches independent quadrature") {
    // cross-check the built-in adaptive evaluation against a fixed
    // high-order panel rule
    const GaussLegendre rule(24);
    for (double s : {0.5, 2.0}) {
        double total = 0.0;
        const int panels = 32;
        for (int p1 = 0; p1 < panels; ++p1)
            for (int i = 0; i < 24; ++i) {
                const double y1 =
                    (p1 + 0.5 + 0.5 * rule.nodes[i]) / panels;
                const double c1 = std::cos(2.0 * M_PI * y1);
                for (int p2 = 0; p2 < panels; ++p2)
                    for (int j = 0; j < 24; ++j) {
                        const double y2 =
                            (p2 + 0.5 + 0.5 * rule.nodes[j]) / panels;
                        const double xi = -c1 - std::cos(2.0 * M_PI * y2);
                        total += rule.weights[i] * rule.weights[j] * 0.25 /
                                 (panels * panels) * s /
                                 std::sqrt(xi * xi + s * s);
                    }
            }
        CHECK(oracle::phi(s, 2) == doctest::Approx(total).epsilon(1e-8));
    }
}

TEST_CASE("scalar constant fixed point") {
    for (double C1 : {0.3, 0.75, 1.0, 2.0}) {
        const auto fp = oracle::solve_scalar_constant(C1, 1);
        CHECK(fp.s_star > 0.0);
        CHECK(fp.s_star < C1);
        CHECK(fp.residual < 1e-12 * std::max(fp.s_star, 1.0));
        // verify the fixed-point equation directly
        CHECK(fp.s_star ==
              doctest::Approx(C1 * oracle::phi(fp.s_star, 1)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(oracle::solve_scalar_constant(0.0, 1), std::domain_error);
}

TEST_CASE("scalar fixed point: coupling asymptotics") {
    // weak coupling: s*(C1) ~ 4 exp(-pi / (2 C1))
    {
        const double C1 = 0.18;
        const auto fp = oracle::solve_scalar_constant(C1, 1);
        const double asym = 4.0 * std::exp(-M_PI / (2.0 * C1));
        CHECK(fp.s_star == doctest::Approx(asym).epsilon(0.10));
    }
    // strong coupling: s*(C1) ~ C1 since phi -> 1
    {
        const double C1 = 50.0;
        const auto fp = oracle::solve_scalar_constant(C1, 1);
        CHECK(fp.s_star == doctest::Approx(C1).epsilon(0.02));
    }
}

TEST_CASE("constant-matrix solution patterns") {
    const double C1 = 1.0;
    const double s = oracle::solve_scalar_constant(C1, 1).s_star;

    const auto unconstrained = oracle::classify_constant_matrix(C1, false, 1);
    REQUIRE(unconstrained.size() == 4);
    int with_s = 0, zero = 0;
    for (const auto& p : unconstrained) {
        for (double sigma : {p.sigma1, p.sigma2}) {
            CHECK((sigma == 0.0 || sigma == doctest::Approx(s)));
            if (sigma != 0.0) ++with_s;
            else ++zero;
        }
    }
    CHECK(with_s == 4);
    CHECK(zero == 4);

    const auto constrained = oracle::classify_constant_matrix(C1, true, 1);
    REQUIRE(constrained.size() == 2);
    CHECK(constrained[0].sigma1 == 0.0);
    CHECK(constrained[0].sigma2 == 0.0);
    CHECK(constrained[1].sigma1 == doctest::Approx(s));
    CHECK(constrained[1].sigma2 == doctest::Approx(s));
    CHECK(constrained[1].antisymmetric_form);
}
