#pragma once

// Rotating-wave Hamiltonian g = (lambda(2n + 1) - 1)^2 / 4
//                               - (f/6)(2 lambda)^{3/2} (a^3 + a^dagger^3)
// in the Fock basis, its per-sector spectra, quasienergy folding, drive
// amplitude scans with crossing detection, and the broken-symmetry intrawell
// states built from the lowest triplet.

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "tripler/fock.hpp"

namespace tripler::rwa {

struct Eigensystem {
    Eigen::VectorXd values;  // ascending
    ComplexMatrix vectors;   // orthonormal columns
};

// Throws std::invalid_argument for non-square or non-Hermitian input.
Eigensystem diagonalize(const ComplexMatrix& m);

ComplexMatrix build_g_block(double f, double lambda, const fock::SectorBasis& sector);
ComplexMatrix build_g_full(double f, double lambda, const fock::FockBasis& basis);

struct SymmetryBlock {
    int k = 0;
    double f = 0.0;
    double lambda = 0.0;
    fock::SectorBasis sector;
    ComplexMatrix matrix;
    Eigen::VectorXd eigenvalues;
    ComplexMatrix eigenvectors;
};

SymmetryBlock solve_block(double f, double lambda, const fock::SectorBasis& sector);
std::vector<SymmetryBlock> solve_sectors(double f, double lambda, int n_max);

// max(60, ceil(12 Q0^2 / (2 lambda))): wells sit at mean occupation ~ Q0^2 / (2 lambda).
int default_nmax(double f, double lambda);

// (E + hbar omegaF k / K) mod hbar omegaF, in [0, hbar omegaF).
double fold_quasienergy(double E, int k, int K, double omegaF, double hbar);

struct ScanOptions {
    int n_max = 0;                         // 0: default_nmax per point
    double detuning_ratio = 1.0 / 303.0;   // delta_omega / omegaF, used for folding
    bool keep_states = false;
    bool check_truncation = true;          // re-solve with n_max + 6
};

/// Lowest eigenvalue of each of the three sectors at one (f, lambda).
struct MultipletRecord {
    double f = 0.0;
    double lambda = 0.0;
    int n_max = 0;
    std::array<double, 3> g{};
    std::array<double, 3> splittings{};     // g[k] - g[0]
    std::array<double, 3> quasienergies{};  // units of hbar omegaF, in [0, 1)
    double truncation_shift = 0.0;          // max |change| under n_max -> n_max + 6 (NaN if unchecked)
    std::array<ComplexVector, 3> states;    // phi^(k) over the full basis when keep_states is set

    double mean() const { return (g[0] + g[1] + g[2]) / 3.0; }
};

MultipletRecord multiplet(double f, double lambda, const ScanOptions& opts = {});

// Parallel over grid points; results in grid order. The grid must ascend.
std::vector<MultipletRecord> scan_f(const std::vector<double>& f_grid, double lambda,
                                    const ScanOptions& opts = {});

struct Crossing {
    double f = 0.0;
    int k_a = 0;
    int k_b = 0;
};

// Sign changes of g[a] - g[b] between neighbouring scan records, refined by
// bisection to relative accuracy 1e-6 in f.
std::vector<Crossing> find_crossings(const std::vector<MultipletRecord>& scan,
                                     const ScanOptions& opts = {});

struct IntrawellState {
    int m = 0;
    ComplexVector amplitudes;
};

struct IntrawellSet {
    std::array<IntrawellState, 3> wells;
    std::array<ComplexVector, 3> phased_triplet;  // phi^(k) after phase alignment
    double max_overlap = 0.0;                     // max |<Psi_m|Psi_m'>|, m != m'
    double localization = 0.0;                    // |<coherent(Q0, 0)|Psi_0>|^2
};

// Psi_m = sum_k phi^(k) exp(2 pi i m k / 3) / sqrt(3), after rotating each
// phi^(k) so its overlap with the coherent state at (Q0, 0) is real positive.
// Refuses f < 0.05 and throws ConvergenceError when the localization falls
// below 0.5.
IntrawellSet intrawell_states(const std::array<ComplexVector, 3>& phi, double f, double lambda);

}  // namespace tripler::rwa
