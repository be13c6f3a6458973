#pragma once

// Truncated Fock space, ladder-operator matrices and the Z_K sector split
// induced by the phase-plane rotation N_K = exp(-2 pi i a^dagger a / K).

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace tripler {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace fock {

/// Fock states |0>, ..., |n_max> together with the sector modulus K.
struct FockBasis {
    int n_max = 0;
    int K = 3;

    int dim() const { return n_max + 1; }
};

// Enforces K >= 2 and n_max >= 3K.
FockBasis make_basis(int n_max, int K = 3);

/// Fock indices n = K j + k <= n_max of one symmetry sector, increasing.
struct SectorBasis {
    int k = 0;
    int K = 3;
    std::vector<int> indices;

    int dim() const { return static_cast<int>(indices.size()); }
};

ComplexMatrix annihilation(int dim);
ComplexMatrix number_operator(const FockBasis& basis);

// a^3 + a^dagger^3 on the full truncated basis. Real symmetric; couples n <-> n +- 3 only.
ComplexMatrix ladder_cubed_elements(const FockBasis& basis);

// exp(-2 pi i n / K).
std::complex<double> rotation_phase(int n, int K);

// Diagonal matrix of rotation_phase(n, K).
ComplexMatrix rotation_operator(const FockBasis& basis);

std::vector<SectorBasis> sector_split(const FockBasis& basis);

// Orthogonal projector onto sector k, as a full-basis matrix.
ComplexMatrix sector_projector(const FockBasis& basis, int k);

ComplexMatrix restrict_to(const ComplexMatrix& full, const SectorBasis& sector);
ComplexVector embed(const ComplexVector& sector_vector, const SectorBasis& sector, int full_dim);

// Largest |A - A^dagger| element.
double hermiticity_error(const ComplexMatrix& m);

// Coherent state |alpha> truncated to dim levels (not renormalized).
ComplexVector coherent_state(std::complex<double> alpha, int dim);

}  // namespace fock
}  // namespace tripler
