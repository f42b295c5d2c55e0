#include <doctest.h>

#include <cmath>
#include <vector>

#include "bcs/kernel.hpp"
#include "bcs/quadrature.hpp"
#include "realspace_oracle.hpp"

using namespace bcs;

TEST_CASE("symbol values and homogeneity") {
    CHECK(kernel_symbol(2.0, {0, 0}, 2) == 0.0);
    CHECK(kernel_symbol(2.0, {3, 4}, 2) == doctest::Approx(0.04));
    CHECK(kernel_symbol(2.01, {1, 0}, 2) == doctest::Approx(1.0));
    for (double nu : {1.5, 2.01, 3.0})
        for (long m : {1L, 2L, 5L})
            CHECK(kernel_symbol(nu, {2 * m, 0}, 1) ==
                  doctest::Approx(std::pow(2.0, -nu) *
                                  kernel_symbol(nu, {m, 0}, 1)));
}

TEST_CASE("direct Epstein sum: 1D reference values") {
    const Lattice line = Lattice::square(1);
    // y = 0: 2 zeta(2) = pi^2 / 3
    const auto z0 = epstein_direct(line, 2.0, {0.0, 0.0}, 2e6);
    CHECK(z0.value.real() ==
          doctest::Approx(M_PI * M_PI / 3.0).epsilon(1e-6));
    // y = 1/2: alternating sum, -2 eta(2) = -pi^2 / 6
    const auto zh = epstein_direct(line, 2.0, {0.5, 0.0}, 2e6);
    CHECK(zh.value.real() ==
          doctest::Approx(-M_PI * M_PI / 6.0).epsilon(1e-6));
    CHECK_THROWS_AS(epstein_direct(line, 0.5, {0.0, 0.0}, 100.0),
                    std::domain_error);
}

TEST_CASE("direct Epstein sum: conjugate symmetry in y") {
    const Lattice sq = Lattice::square(2);
    const std::array<double, 2> y{0.23, 0.61};
    const auto zp = epstein_direct(sq, 3.0, y, 60.0);
    const auto zm = epstein_direct(sq, 3.0, {-y[0], -y[1]}, 60.0);
    CHECK(std::abs(zm.value - std::conj(zp.value)) < 1e-12);
}

TEST_CASE("assemble_B generator is real, even and PSD") {
    const SplineBasis b(1, 2, 16);
    const KernelSpec spec(0.0, 1.0, 2.5);
    const auto B = assemble_B(b, spec);
    const int n = b.n;
    for (int j = 0; j < n; ++j) {
        CHECK(std::abs(B.generator()[j].imag()) < 1e-14);
        CHECK(B.generator()[j].real() ==
              doctest::Approx(B.generator()[(n - j) % n].real())
                  .epsilon(1e-12));
    }
    for (const auto& e : B.spectrum()) CHECK(e.real() > -1e-14);
    // zero mode: sigma(0) = 0 kills the constant eigenvalue of B only via
    // folded contributions; the smallest eigenvalue need not vanish, but
    // the operator must stay PSD (checked above)
}

TEST_CASE("folding tail control: tightening the tolerance is stable") {
    const SplineBasis b(1, 1, 16);
    const KernelSpec spec(0.0, 1.0, 3.0);
    const auto coarse = assemble_B(b, spec, 1e-6);
    const auto fine = assemble_B(b, spec, 1e-14);
    double scale = 0.0;
    for (const auto& g : fine.generator())
        scale = std::max(scale, std::abs(g));
    for (int j = 0; j < b.n; ++j)
        CHECK(std::abs(coarse.generator()[j] - fine.generator()[j]) <
              1e-6 * scale);
}

TEST_CASE("sigma == 1 recovers the mass matrix after adding the zero mode") {
    // nu = 0 makes sigma(m) = 1 for m != 0; adding back the missing m = 0
    // term |c_1(0)|^2 = h^{2d} to every entry reproduces <phi_l, phi_k>
    for (int d : {1, 2}) {
        const SplineBasis b(d, 2, d == 1 ? 16 : 8);
        const auto B = assemble_B(b, KernelSpec(0.0, 1.0, 0.0));
        const auto M = b.mass_matrix();
        const double h2d = std::pow(b.h(), 2 * d);
        for (std::size_t j = 0; j < b.size(); ++j)
            CHECK(B.generator()[j].real() + h2d ==
                  doctest::Approx(M.generator()[j].real()).epsilon(1e-10));
    }
}

TEST_CASE("assemble_A combines the constant and long-range parts") {
    {
        // C2 = 0, d = 1: A 1 = C1 h n h 1 = C1 h 1 (row sums)
        const SplineBasis b(1, 1, 8);
        const auto A = assemble_A(b, KernelSpec(2.0, 0.0, 0.0));
        std::vector<cplx> ones(b.size(), 1.0);
        const auto av = A.matvec(ones);
        for (const auto& v : av)
            CHECK(v.real() == doctest::Approx(2.0 * b.h()).epsilon(1e-13));
    }
    {
        // C1 = 0: A == C2 B
        const SplineBasis b(1, 2, 16);
        const KernelSpec spec(0.0, 0.7, 2.5);
        const auto A = assemble_A(b, spec);
        const auto B = assemble_B(b, spec);
        for (std::size_t j = 0; j < b.size(); ++j)
            CHECK(std::abs(A.generator()[j] - 0.7 * B.generator()[j]) <
                  1e-14);
    }
    {
        // the d = 2 example parameters at a reduced grid: PSD spectrum
        const SplineBasis b(2, 3, 16);
        const auto A = assemble_A(b, KernelSpec(0.75, 0.7, 2.01));
        double maxeig = 0.0;
        for (const auto& e : A.spectrum())
            maxeig = std::max(maxeig, std::abs(e));
        for (const auto& e : A.spectrum())
            CHECK(e.real() > -1e-13 * maxeig);
    }
}

TEST_CASE("galerkin entries: symbol folding vs real-space quadrature") {
    // d = 1, mu = 1, n = 16, nu = 3: double Gauss quadrature of the
    // truncated direct lattice sum against the folded symbol route
    const SplineBasis b(1, 1, 16);
    const double nu = 3.0;
    const auto B = assemble_B(b, KernelSpec(0.0, 1.0, nu));
    for (int j : {0, 1, 3, 8}) {
        const double ref =
            bcs::testing::realspace_B_entry(b, nu, j, 4, 12, 30000);
        CHECK(B.generator()[j].real() ==
              doctest::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("sobolev norm") {
    using Modes =
        std::vector<std::pair<std::array<long, 2>, std::complex<double>>>;
    CHECK(sobolev_norm(Modes{{{0, 0}, 1.0}}, 0.0, 2) == doctest::Approx(1.0));
    CHECK(sobolev_norm(Modes{{{1, 0}, 1.0}}, 1.0, 2) ==
          doctest::Approx(std::sqrt(2.0)));

    // spline coefficients: finite below mu + 1/2, unbounded growth at it
    const SplineBasis b(1, 1, 8);
    auto truncated_norm = [&](double s, long M) {
        Modes modes;
        for (long m = -M; m <= M; ++m)
            modes.push_back({{m, 0}, b.fourier_coeff_phi1_1d(m)});
        return sobolev_norm(modes, s, 1);
    };
    // convergent for s < mu + 1/2: the increments per frequency octave
    // shrink geometrically (tail ~ M^{2s - 2mu - 1})
    const double below_1 = truncated_norm(1.2, 1000);
    const double below_2 = truncated_norm(1.2, 8000);
    const double below_3 = truncated_norm(1.2, 64000);
    CHECK(below_2 - below_1 < 0.01 * below_1);
    CHECK(below_3 - below_2 < 0.5 * (below_2 - below_1));
    // logarithmic divergence at s = mu + 1/2: increments do not die off
    const double at_1 = truncated_norm(1.5, 1000);
    const double at_2 = truncated_norm(1.5, 8000);
    const double at_3 = truncated_norm(1.5, 64000);
    CHECK(at_2 > at_1 + 1e-4);
    CHECK(at_3 > at_2 + 1e-4);
    CHECK(at_3 - at_2 > 0.5 * (at_2 - at_1));
}
