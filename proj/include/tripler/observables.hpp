#pragma once

// Lab-frame coordinate expectation values computed from rotating-frame
// states, period-tripling scores and windowed Fourier spectra.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "tripler/fock.hpp"

namespace tripler::observables {

/// Uniformly sampled real signal.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;
    std::string label;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    double span() const { return dt * static_cast<double>(values.size() - 1); }
};

// Rotating-frame g in its sector eigenbasis, with the frequency scale of one
// unit of g and the conversion to the lab coordinate.
struct RotatingFrame {
    double f = 0.0;
    double lambda = 0.0;
    double rate = 0.0;     // delta_omega / lambda
    double omegaF = 0.0;
    double C = 1.0;
    Eigen::VectorXd energies;        // g eigenvalues, sector blocks concatenated
    std::vector<int> sector_of;      // sector label of each eigenvector
    std::vector<int> level_in_sector;
    ComplexMatrix vectors;           // columns: eigenvectors in the Fock basis
    ComplexMatrix a_eig;             // V^dagger a V
};

// Sector-resolved diagonalization so that nearly degenerate states keep their
// labels. Units: omegaF and delta_omega in the same frequency units.
RotatingFrame make_rotating_frame(double f, double lambda, int n_max, double delta_omega, double omegaF,
                                  double C = 1.0);

// Copy of frame with the lowest level of every sector moved to their mean,
// removing the tunnel splitting of the ground triplet.
RotatingFrame without_tunneling(const RotatingFrame& frame);

// <a>(t) = sum_j amp_j exp(i nu_j t).
struct SignalTerms {
    std::vector<std::complex<double>> amp;
    std::vector<double> nu;
};

SignalTerms ladder_signal(const RotatingFrame& frame, const ComplexVector& psi);

// <q>(t) = C Re[ sqrt(2 lambda) <a>(t) exp(-i omegaF t / 3) ] sampled at t0 + i dt.
TimeSeries expect_q(const RotatingFrame& frame, const ComplexVector& psi, double t0, double dt, std::size_t n);

struct Period3Score {
    double score3 = 0.0;  // RMS of s(t + 3 tF) - s(t) over RMS of s
    double score1 = 0.0;  // same for a shift by tF
};

// Needs >= 12 drive periods and tF an integer multiple of dt (to 1e-9).
Period3Score period3_score(const TimeSeries& series, double tF);

struct Peak {
    double freq = 0.0;    // parabolic interpolation between bins
    double weight = 0.0;
    std::size_t bin = 0;
};

struct SpectralPeaks {
    std::vector<double> freq;    // cycles per unit time, 0 .. Nyquist
    std::vector<double> weight;  // one-sided power of the windowed signal
    std::vector<Peak> peaks;     // local maxima, by decreasing weight
    double bin_width = 0.0;
    double parseval_error = 0.0; // relative
    std::vector<std::string> warnings;
};

// Hann-windowed real DFT. When target_omega (rad/time) is given and the span
// is shorter than 4 / |target_omega| a resolution warning is attached.
SpectralPeaks spectrum(const TimeSeries& series, std::optional<double> target_omega = std::nullopt,
                       std::size_t max_peaks = 16);

}  // namespace tripler::observables
