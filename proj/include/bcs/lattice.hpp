#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace bcs {

/// Periodic lattice Lambda = A Z^d with d in {1,2}. The reciprocal unit
/// cell is parametrized by the unit torus [0,1)^d; all momentum-space
/// quantities below take torus coordinates.
///
/// Immutable after construction; safe for concurrent reads.
class Lattice {
public:
    static constexpr int max_dim = 2;

    /// d=1 lattice with generating "matrix" a (scalar).
    explicit Lattice(double a) : d_(1) {
        A_ = {a, 0.0, 0.0, 1.0};
        check_regular();
    }

    /// d=2 lattice with generating matrix rows (a11,a12),(a21,a22).
    Lattice(double a11, double a12, double a21, double a22) : d_(2) {
        A_ = {a11, a12, a21, a22};
        check_regular();
    }

    static Lattice square(int d) {
        if (d == 1) return Lattice(1.0);
        if (d == 2) return Lattice(1.0, 0.0, 0.0, 1.0);
        throw std::invalid_argument("lattice: d must be 1 or 2");
    }

    int dim() const { return d_; }

    double det() const {
        return d_ == 1 ? A_[0] : A_[0] * A_[3] - A_[1] * A_[2];
    }

    /// Unit cell volume V = |det A|.
    double cell_volume() const { return std::abs(det()); }

    /// Nearest-neighbor tight-binding dispersion
    ///   xi(y) = -sum_j cos(2 pi (A y)_j),   y in torus coordinates.
    double dispersion(const std::array<double, max_dim>& y) const {
        double xi = 0.0;
        for (int j = 0; j < d_; ++j) {
            double ay = 0.0;
            for (int i = 0; i < d_; ++i) ay += A_[j * 2 + i] * y[i];
            xi -= std::cos(2.0 * M_PI * ay);
        }
        return xi;
    }

    double dispersion(double y) const { return dispersion({y, 0.0}); }

    /// True iff |xi(y)| < tol, i.e. y lies on the discrete Fermi surface.
    bool fermi_surface_indicator(const std::array<double, max_dim>& y,
                                 double tol) const {
        return std::abs(dispersion(y)) < tol;
    }

private:
    void check_regular() const {
        if (det() == 0.0)
            throw std::invalid_argument("lattice: generating matrix is singular");
    }

    int d_;
    std::array<double, 4> A_;  // row-major, unused entries identity-padded
};

}  // namespace bcs
