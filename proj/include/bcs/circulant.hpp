#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bcs/fft.hpp"

namespace bcs {

using cplx = std::complex<double>;

/// Thrown by Circulant::solve when an eigenvalue is below the singularity
/// threshold; carries the offending frequency index.
class SingularOperatorError : public std::runtime_error {
public:
    SingularOperatorError(std::size_t freq, double magnitude)
        : std::runtime_error(message(freq, magnitude)), frequency(freq) {}
    std::size_t frequency;

private:
    static std::string message(std::size_t freq, double magnitude) {
        std::ostringstream os;
        os << "circulant solve: eigenvalue at frequency " << freq
           << " has magnitude " << magnitude << " below threshold";
        return os.str();
    }
};

/// d-dimensional (block-)circulant operator on grids of n points per
/// dimension. Stored by its generating array a(j), j in {0..n-1}^d; the
/// dense matrix it represents is A_{k,l} = a((k-l) mod n). Diagonalized by
/// the d-dimensional DFT: eig = DFT(gen).
///
/// Immutable after construction. Eigenvalues are computed eagerly, so all
/// member calls are const and safe to run concurrently.
class Circulant {
public:
    Circulant(int d, int n, std::vector<cplx> gen)
        : d_(d), n_(n), gen_(std::move(gen)) {
        if (d < 1 || d > 2) throw std::invalid_argument("circulant: d must be 1 or 2");
        if (gen_.size() != size())
            throw std::invalid_argument("circulant: generator has wrong length");
        eig_ = detail::dft(gen_, dims(), FFTW_FORWARD);
    }

    static Circulant identity(int d, int n) {
        std::vector<cplx> g(ipow(n, d), 0.0);
        g[0] = 1.0;
        return Circulant(d, n, std::move(g));
    }

    int dim() const { return d_; }
    int n() const { return n_; }
    std::size_t size() const { return ipow(n_, d_); }
    std::vector<int> dims() const { return std::vector<int>(d_, n_); }

    const std::vector<cplx>& generator() const { return gen_; }

    /// Eigenvalues, ordered as the DFT of the generator.
    const std::vector<cplx>& spectrum() const { return eig_; }

    /// y = A v via DFT diagonalization.
    std::vector<cplx> matvec(const std::vector<cplx>& v) const {
        auto vh = transformed(v, FFTW_FORWARD);
        for (std::size_t i = 0; i < vh.size(); ++i) vh[i] *= eig_[i];
        return inverse(vh);
    }

    /// Solves A x = b. Throws SingularOperatorError when an eigenvalue
    /// magnitude falls below eps_sing (default 1e-13 * max |eig|).
    std::vector<cplx> solve(const std::vector<cplx>& b,
                            double eps_sing = -1.0) const {
        if (eps_sing < 0.0) eps_sing = 1e-13 * max_abs_eig();
        auto bh = transformed(b, FFTW_FORWARD);
        for (std::size_t i = 0; i < bh.size(); ++i) {
            const double m = std::abs(eig_[i]);
            if (m <= eps_sing) throw SingularOperatorError(i, m);
            bh[i] /= eig_[i];
        }
        return inverse(bh);
    }

    /// Pseudo-inverse solve: frequencies with |eig| <= eps are mapped to
    /// zero instead of throwing. Used where a known null mode is harmless
    /// (e.g. midpoint collocation of odd-degree splines at Nyquist).
    std::vector<cplx> solve_pruned(const std::vector<cplx>& b,
                                   double eps = -1.0) const {
        if (eps < 0.0) eps = 1e-12 * max_abs_eig();
        auto bh = transformed(b, FFTW_FORWARD);
        for (std::size_t i = 0; i < bh.size(); ++i) {
            bh[i] = std::abs(eig_[i]) <= eps ? cplx(0.0) : bh[i] / eig_[i];
        }
        return inverse(bh);
    }

    double max_abs_eig() const {
        double m = 0.0;
        for (const auto& e : eig_) m = std::max(m, std::abs(e));
        return m;
    }

    double min_abs_eig() const {
        double m = std::abs(eig_.empty() ? 0.0 : std::abs(eig_[0]));
        for (const auto& e : eig_) m = std::min(m, std::abs(e));
        return m;
    }

    bool is_hermitian(double tol = 1e-12) const {
        // a(-j mod n) == conj(a(j))
        for (std::size_t idx = 0; idx < gen_.size(); ++idx) {
            if (std::abs(gen_[reflect(idx)] - std::conj(gen_[idx])) > tol)
                return false;
        }
        return true;
    }

    Circulant scaled(cplx factor) const {
        auto g = gen_;
        for (auto& v : g) v *= factor;
        return Circulant(d_, n_, std::move(g));
    }

    Circulant plus(const Circulant& other) const {
        if (other.d_ != d_ || other.n_ != n_)
            throw std::invalid_argument("circulant: shape mismatch");
        auto g = gen_;
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += other.gen_[i];
        return Circulant(d_, n_, std::move(g));
    }

    static std::size_t ipow(int base, int exp) {
        std::size_t r = 1;
        for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
        return r;
    }

private:
    std::vector<cplx> transformed(const std::vector<cplx>& v, int sign) const {
        if (v.size() != size())
            throw std::invalid_argument("circulant: vector length mismatch");
        return detail::dft(v, dims(), sign);
    }

    std::vector<cplx> inverse(std::vector<cplx>& vh) const {
        detail::dft_inplace(vh, dims(), FFTW_BACKWARD);
        const double scale = 1.0 / static_cast<double>(size());
        for (auto& v : vh) v *= scale;
        return std::move(vh);
    }

    // flattened index of (-j mod n) per dimension
    std::size_t reflect(std::size_t idx) const {
        if (d_ == 1) return (size() - idx) % size();
        const std::size_t nn = static_cast<std::size_t>(n_);
        std::size_t i = idx / nn, j = idx % nn;
        return ((nn - i) % nn) * nn + (nn - j) % nn;
    }

    int d_, n_;
    std::vector<cplx> gen_;
    std::vector<cplx> eig_;
};

}  // namespace bcs
