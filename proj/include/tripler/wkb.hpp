#pragma once

// Semiclassical (WKB) description of tunneling between the three wells of
//
//   g(Q, P) = (Q^2 + P^2 - 1)^2 / 4 - f (Q^3 - 3 P Q P) / 3,
//
// leading to the tunnel-split lowest triplet
//
//   g^(k) - g0 = C_tun exp(-S_tun / lambda) cos(Phi_tun / lambda - 2 pi k / 3).

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace tripler::wkb {

// Q0 = (f + sqrt(f^2 + 4)) / 2; valid for f >= 0 (Q0 = 1 on the f = 0 ring).
double well_radius(double f);

/// Positions of the three minima, curvature data and branch point.
struct ClassicalGeometry {
    double f = 0.0;
    double lambda = 0.0;
    double Q0 = 0.0, Q1 = 0.0, Q2 = 0.0;
    double P0 = 0.0, P1 = 0.0, P2 = 0.0;
    double g_min = 0.0;
    double omega_min = 0.0;  // sqrt(det Hessian) at a minimum
    double Q_B = 0.0;        // zero of B_cl between Q1 and Q0: Q0 - 3f/4
    double g0 = 0.0;         // g_min + lambda * omega_min / 2
};

// Throws ModelValidityError for f <= 0.
ClassicalGeometry geometry(double f, double lambda);

// g(Q, 0) = (Q^2 - 1)^2 / 4 - f Q^3 / 3.
double g_on_axis(double Q, double f);

// A(Q) = 1 - Q^2 - 2 f Q.
double A_coefficient(double Q, double f);

// B(Q) = A^2 - 4 [g(Q, 0) - g0], evaluated directly.
double B_coefficient(double Q, double f, double g0);

// B at lambda = 0 in factored form (16 f / 3)(Q - Q1)^2 (Q - Q_B).
double B_classical(double Q, const ClassicalGeometry& geo);

/// Complex momentum P on the branch g(Q, P) = g0 that decays away from Q0.
struct MomentumBranch {
    std::complex<double> P;
    std::complex<double> sqrtB;  // i |B|^{1/2} where B < 0
    std::complex<double> dg_dP;  // P * sqrtB
};

// Branch with arbitrary g0. Throws std::out_of_range for Q outside [Q1, Q0].
MomentumBranch momentum_branch(double Q, double f, double lambda, double g0);

// The lambda = 0 branch (g0 -> g_min), evaluated without cancellation near
// Q0, Q_B and Q1.
MomentumBranch classical_momentum(double Q, const ClassicalGeometry& geo);

struct WkbResult {
    ClassicalGeometry geo;
    double S_classical = 0.0;    // integral of Im P_cl from Q0 to Q1
    double Phi_classical = 0.0;  // integral of Re P_cl from Q_B to Q1
    std::complex<double> K_tun;
    double theta1 = 0.0;
    double S_tun = 0.0;
    double Phi_tun = 0.0;
    double C_tun = 0.0;
    std::array<double, 3> splittings{};  // g^(k) - g0

    // Phi_tun / lambda reduced to [0, pi), the period of the crossing lattice.
    double phase_mod_pi() const;
    // |C_tun| exp(-S_tun / lambda).
    double envelope() const;
};

// Throws ConvergenceError naming the integral when node doubling moves a
// quadrature by more than 1e-8.
WkbResult tunnel_quantities(double f, double lambda);

double splitting(const WkbResult& wkb, int k);

// Crossing predicted at Phi_tun / lambda = m pi / 3. Index m fixes which pair
// of sectors is degenerate: m = 1 mod 3 -> (0,1), 2 -> (0,2), 0 -> (1,2).
struct WkbCrossing {
    double f = 0.0;
    long lattice_index = 0;
    int k_a = 0;
    int k_b = 0;
};

std::array<int, 2> crossing_pair(long lattice_index);

std::vector<WkbCrossing> crossing_locations(double f_lo, double f_hi, double lambda,
                                            int samples = 96);

}  // namespace tripler::wkb
