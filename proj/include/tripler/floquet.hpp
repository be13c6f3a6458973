#pragma once

// Exact one-period propagation of the lab-frame Hamiltonian
//
//   H(t) = p^2/2 + omega0^2 q^2/2 + gamma q^4/4 - (F/3) q^3 cos(omegaF t)
//
// in a truncated Fock basis, quasienergies from the monodromy operator, and
// their comparison with the folded rotating-wave spectrum.

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "tripler/fock.hpp"
#include "tripler/params.hpp"
#include "tripler/rwa.hpp"

namespace tripler::floquet {

struct LabHamiltonian {
    LabParams params;
    int n_max = 0;
    ComplexMatrix q;          // sqrt(hbar / 2 omega0) (a + a^dagger)
    ComplexMatrix p;          // i sqrt(hbar omega0 / 2) (a^dagger - a)
    Eigen::MatrixXd h0;       // static part
    Eigen::MatrixXd drive;    // -(F/3) q^3; multiplied by cos(omegaF t)

    double period() const;
};

// Operator products are formed in a basis padded by four levels and then
// cropped, so every retained matrix element of q^3 and q^4 is exact.
LabHamiltonian make_lab_hamiltonian(const LabParams& params, int n_max);

struct MonodromyResult {
    ComplexMatrix U;
    Eigen::VectorXd quasienergies;  // in [0, hbar omegaF), one per eigenvector
    ComplexMatrix eigenvectors;     // normalized columns
    int steps = 0;
    double unitarity_error = 0.0;   // max |U^dagger U - I|
};

// Ordered product of midpoint-frozen exact exponentials over [t0, t1].
ComplexMatrix propagate(const LabHamiltonian& h, double t0, double t1, int steps);

MonodromyResult propagate_period(const LabHamiltonian& h, int steps);

// Maps a state in the Fock basis of the rotating frame (ladder operator of
// frequency omegaF/3) onto the lab Fock basis (frequency omega0) at t = 0.
ComplexMatrix rotating_to_lab_map(const LabParams& lab, int dim);

// Constant relating RWA energies to quasienergies: E = Xi g + offset with
// offset = hbar omegaF / 6 + Xi (lambda^2 - 1) / 4.
double rwa_energy_offset(const LabParams& lab);

struct RwaMatch {
    int k = 0;
    int index = -1;              // column of the monodromy eigenvector
    double eps_exact = 0.0;
    double eps_rwa = 0.0;
    double residual = 0.0;       // eps_exact - eps_rwa, wrapped to (-hbar omegaF/2, hbar omegaF/2]
    double overlap = 0.0;        // |<u|S phi^(k)>|^2
    double second_overlap = 0.0;
    bool ambiguous = false;      // second_overlap within 10% of overlap
    double leakage = 0.0;        // weight of u in the top 10% of the basis
};

struct MatchReport {
    std::array<RwaMatch, 3> rows;
    // (eps_{k+1} - eps_k) - hbar omegaF / 3, cyclic in k, exact and RWA-predicted.
    std::array<double, 3> spacing_dev_exact{};
    std::array<double, 3> spacing_dev_rwa{};
    double spacing_err = 0.0;         // max |spacing_dev_exact|
    double spacing_residual = 0.0;    // max |spacing_dev_exact - spacing_dev_rwa|
    bool any_ambiguous = false;
    double max_leakage = 0.0;
};

// rwa must carry its states (ScanOptions::keep_states).
MatchReport match_to_rwa(const MonodromyResult& mono, const rwa::MultipletRecord& rwa,
                         const LabParams& lab);

// Largest quasienergy change of the states best matching the probes when the
// step count is doubled.
double step_refinement_change(const LabHamiltonian& h, int steps, const std::vector<ComplexVector>& probes);

struct FloquetComparison {
    LabParams lab;
    ScaledParams scaled;
    rwa::MultipletRecord rwa;
    MonodromyResult mono;
    MatchReport report;
    double step_change = 0.0;
};

// Full pipeline at (f, lambda, delta_omega/omegaF). Throws ConvergenceError if
// step doubling moves the triplet quasienergies by more than 1e-6.
FloquetComparison compare_with_rwa(double f, double lambda, double detuning_ratio, int n_max, int steps);
FloquetComparison compare_with_rwa(const LabParams& lab, int n_max, int steps);

}  // namespace tripler::floquet
