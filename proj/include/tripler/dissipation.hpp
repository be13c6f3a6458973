#pragma once

// Weak-damping master equation in the rotating frame,
//
//   drho/dt = -(i/hbar)[H, rho]
//             - Gamma (nbar + 1)(a^dagger a rho - 2 a rho a^dagger + rho a^dagger a)
//             - Gamma nbar (a a^dagger rho - 2 a^dagger rho a + rho a a^dagger),
//
// together with the tight-binding description of interwell tunneling and the
// incoherent three-state hopping kinetics.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tripler/fock.hpp"
#include "tripler/rwa.hpp"
#include "tripler/wkb.hpp"

namespace tripler::dissipation {

using SparseComplex = Eigen::SparseMatrix<std::complex<double>>;

class LindbladGenerator {
public:
    // H_over_hbar must be Hermitian; diagonals with no entry above 1e-300 are dropped.
    LindbladGenerator(const ComplexMatrix& H_over_hbar, double Gamma, double nbar);

    int dim() const { return dim_; }
    double Gamma() const { return Gamma_; }
    double nbar() const { return nbar_; }

    ComplexMatrix rhs(const ComplexMatrix& rho) const;

    // Upper bound on the magnitude of the generator's eigenvalues; RK4 is
    // stable for dt below about 2.8 divided by this.
    double spectral_bound() const { return bound_; }

private:
    int dim_;
    double Gamma_;
    double nbar_;
    std::vector<std::pair<int, ComplexVector>> diagonals_;
    Eigen::VectorXd root_;  // sqrt(n)
    double bound_ = 0.0;
};

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& H, double Gamma, double nbar,
                           double hbar = 1.0);

struct EvolveOptions {
    double T = 0.0;
    double dt = 0.0;          // 0: 0.2 / spectral_bound
    int record_every = 1;     // observer call interval in steps (the initial state is always reported)
    bool check_positivity = true;
};

// Observer receives (t, rho, trace_err) where trace_err = |Tr rho - 1|.
using Observer = std::function<void(double, const ComplexMatrix&, double)>;

// Fixed-step RK4 with Hermitization after every step. Throws ConvergenceError
// when the trace drifts by more than 1e-6 or an eigenvalue of rho drops below
// -1e-6 at a recorded step. Returns the final state.
ComplexMatrix evolve(const ComplexMatrix& rho0, const LindbladGenerator& gen, const EvolveOptions& opts,
                     const Observer& observer = {});

// Unique stationary state from a sparse LU solve of the Liouvillian with one
// equation replaced by the trace condition. Throws ConvergenceError if the
// system is singular (e.g. Gamma = 0).
ComplexMatrix steady_state(const LindbladGenerator& gen);

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double purity(const ComplexMatrix& rho);
double min_eigenvalue(const ComplexMatrix& rho);

ComplexMatrix pure_state(const ComplexVector& psi);

enum class Regime { coherent, incoherent };
const char* to_string(Regime r);

struct HoppingModel {
    std::complex<double> t_tun;   // energy units
    std::optional<double> W;      // absent when Gamma = 0
    std::array<double, 3> Omega;  // Omega_10, Omega_20, Omega_21 (rad/time)
    Regime regime = Regime::coherent;

    double max_Omega() const;
};

// Omega is built from g_triplet when given, otherwise from the WKB splittings.
HoppingModel hopping_model(double f, double lambda, double delta_omega, double Gamma, double hbar,
                           const wkb::WkbResult& wkb,
                           const std::optional<std::array<double, 3>>& g_triplet = std::nullopt);

// 3-site ring with hopping tau from site m - 1 to m and its conjugate back.
Eigen::Matrix3cd ring_hamiltonian(std::complex<double> tau);
// Ring energies labelled by the Fourier index k: tau e^{-2 pi i k/3} + c.c.
std::array<double, 3> ring_levels(std::complex<double> tau);

Eigen::Matrix3d rate_matrix(double W);
std::array<double, 3> three_state_kinetics(const std::array<double, 3>& p0, double W, double t);

// (1 + 2 f Q0 - omega_min) / (1 + 2 f Q0 + omega_min). Throws
// ModelValidityError when the ratio is not positive.
double boltzmann_ratio(double f);

// n commutes with every sector projector of the basis.
bool dephasing_block_check(const fock::FockBasis& basis);

std::array<double, 3> well_populations(const ComplexMatrix& rho, const rwa::IntrawellSet& wells);
std::complex<double> well_coherence(const ComplexMatrix& rho, const rwa::IntrawellSet& wells, int m, int n);

struct CoherenceDecay {
    double rate = 0.0;       // fitted decay rate of |<Psi_0|rho|Psi_1>|
    double r_squared = 0.0;  // quality of the log-linear fit
    int samples = 0;
};

// Evolves (Psi_0 + Psi_1)/sqrt(2) in units delta_omega = hbar = 1 and fits
// ln |<Psi_0|rho|Psi_1>| over roughly 1.5 estimated decay times.
CoherenceDecay measure_coherence_decay(double f, double lambda, double Gamma, int n_max);

}  // namespace tripler::dissipation
