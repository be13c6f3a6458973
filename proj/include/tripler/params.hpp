#pragma once

// Laboratory and rotating-frame parameters of the cubically driven Duffing
// oscillator, and the conversions between them.

#include <stdexcept>
#include <string>

namespace tripler {

// Parameters outside the model's domain (e.g. gamma * detuning <= 0).
class ModelValidityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical procedure failed to reach its stated accuracy.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical oscillator and drive parameters.
///
/// H = p^2/2 + omega0^2 q^2/2 + gamma q^4/4 - (F/3) q^3 cos(omegaF t),
/// with energy relaxation at rate 2*Gamma into a bath with Planck number nbar.
struct LabParams {
    double omega0 = 1.0;
    double gamma = 0.0;
    double F = 0.0;
    double omegaF = 3.0;
    double hbar = 1.0;
    double Gamma = 0.0;
    double nbar = 0.0;

    // Throws ModelValidityError when an invariant is violated.
    void validate() const;
};

/// Dimensionless description of the resonant dynamics in the frame rotating
/// at omegaF/K. Only K = 3 has closed-form reductions.
struct ScaledParams {
    int K = 3;
    double f = 0.0;            // scaled drive amplitude
    double lambda = 0.0;       // dimensionless Planck constant
    double delta_omega = 0.0;  // omegaF/3 - omega0
    double C = 0.0;            // phase-space length scale
    double Xi = 0.0;           // energy scale: H_RWA = Xi * g

    // Frequency corresponding to one unit of g: Xi/hbar == delta_omega/lambda.
    double rate_per_unit_g() const { return delta_omega / lambda; }
};

ScaledParams to_scaled(const LabParams& lab);

// Inverse of to_scaled. The relaxation parameters are not part of the
// rotating-frame reduction and are passed through.
LabParams from_scaled(const ScaledParams& scaled, double Gamma = 0.0, double nbar = 0.0);

// Effective cubic amplitude reproducing the resonant action of a linear
// drive -q F' cos(omegaF t): F = 3 gamma F' / (8 omega0^2).
double linear_drive_equivalent(double Fprime, const LabParams& lab);

// Partial derivatives of f with respect to the lab parameters.
struct DriveSensitivity {
    double df_dF;
    double df_dgamma;
    double df_domegaF;
    double df_domega0;
};

DriveSensitivity drive_sensitivity(const LabParams& lab);

// Lab parameters with omega0 and hbar fixed that map onto the requested
// (f, lambda) at relative detuning delta_omega/omegaF = detuning_ratio.
LabParams lab_for_scaled(double f, double lambda, double detuning_ratio, double omega0 = 1.0,
                         double hbar = 1.0);

}  // namespace tripler
