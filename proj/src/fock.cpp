#include "tripler/fock.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tripler::fock {

FockBasis make_basis(int n_max, int K) {
    if (K < 2) throw std::invalid_argument("sector modulus K must be >= 2");
    if (n_max < 3 * K) throw std::invalid_argument("n_max must be at least 3K");
    return FockBasis{n_max, K};
}

ComplexMatrix annihilation(int dim) {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix number_operator(const FockBasis& basis) {
    ComplexMatrix n = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (int i = 0; i < basis.dim(); ++i) n(i, i) = static_cast<double>(i);
    return n;
}

ComplexMatrix ladder_cubed_elements(const FockBasis& basis) {
    if (basis.n_max < 3) throw std::invalid_argument("a^3 needs n_max >= 3");
    const int d = basis.dim();
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int n = 0; n + 3 < d; ++n) {
        const double x = std::sqrt(static_cast<double>(n + 1) * (n + 2) * (n + 3));
        m(n + 3, n) = x;  // <n+3| a^dagger^3 |n>
        m(n, n + 3) = x;  // <n| a^3 |n+3>
    }
    return m;
}

std::complex<double> rotation_phase(int n, int K) {
    if (n < 0 || K < 2) throw std::invalid_argument("rotation_phase needs n >= 0 and K >= 2");
    // Reduce first so the phase is exact for multiples of K.
    const int r = n % K;
    if (r == 0) return {1.0, 0.0};
    const double angle = -2.0 * std::numbers::pi * r / K;
    return {std::cos(angle), std::sin(angle)};
}

ComplexMatrix rotation_operator(const FockBasis& basis) {
    ComplexMatrix m = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (int n = 0; n < basis.dim(); ++n) m(n, n) = rotation_phase(n, basis.K);
    return m;
}

std::vector<SectorBasis> sector_split(const FockBasis& basis) {
    std::vector<SectorBasis> sectors(basis.K);
    for (int k = 0; k < basis.K; ++k) {
        sectors[k].k = k;
        sectors[k].K = basis.K;
        for (int n = k; n <= basis.n_max; n += basis.K) sectors[k].indices.push_back(n);
    }
    return sectors;
}

ComplexMatrix sector_projector(const FockBasis& basis, int k) {
    ComplexMatrix p = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (int n = k; n <= basis.n_max; n += basis.K) p(n, n) = 1.0;
    return p;
}

ComplexMatrix restrict_to(const ComplexMatrix& full, const SectorBasis& sector) {
    const int d = sector.dim();
    ComplexMatrix out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = full(sector.indices[i], sector.indices[j]);
    return out;
}

ComplexVector embed(const ComplexVector& v, const SectorBasis& sector, int full_dim) {
    if (v.size() != sector.dim()) throw std::invalid_argument("embed: vector/sector size mismatch");
    ComplexVector out = ComplexVector::Zero(full_dim);
    for (int i = 0; i < sector.dim(); ++i) {
        if (sector.indices[i] >= full_dim) throw std::invalid_argument("embed: target basis too small");
        out(sector.indices[i]) = v(i);
    }
    return out;
}

double hermiticity_error(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexVector coherent_state(std::complex<double> alpha, int dim) {
    ComplexVector v(dim);
    // c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), built by recursion to avoid overflow.
    std::complex<double> c = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < dim; ++n) {
        v(n) = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

}  // namespace tripler::fock
