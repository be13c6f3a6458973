#include "tripler/params.hpp"

#include <cmath>

namespace tripler {

void LabParams::validate() const {
    if (!(omega0 > 0.0)) throw ModelValidityError("omega0 must be positive");
    if (!(omegaF > 0.0)) throw ModelValidityError("omegaF must be positive");
    if (!(hbar > 0.0)) throw ModelValidityError("hbar must be positive");
    if (!(Gamma >= 0.0)) throw ModelValidityError("Gamma must be non-negative");
    if (!(nbar >= 0.0)) throw ModelValidityError("nbar must be non-negative");
    const double detuning = omegaF / 3.0 - omega0;
    if (!(gamma * detuning > 0.0)) {
        throw ModelValidityError(
            "gamma * (omegaF/3 - omega0) must be positive; the reduction assumes gamma > 0 and "
            "delta_omega > 0");
    }
    if (gamma < 0.0) {
        throw ModelValidityError("gamma < 0 with delta_omega < 0 is not supported; use gamma > 0");
    }
}

ScaledParams to_scaled(const LabParams& lab) {
    lab.validate();
    ScaledParams s;
    s.K = 3;
    s.delta_omega = lab.omegaF / 3.0 - lab.omega0;
    const double dw = s.delta_omega;
    s.C = std::sqrt(8.0 * lab.omegaF * dw / (9.0 * lab.gamma));
    s.lambda = 27.0 * lab.hbar * lab.gamma / (8.0 * lab.omegaF * lab.omegaF * dw);
    // The spectrum depends on |f| only; the sign is a phase-plane rotation.
    s.f = std::abs(lab.F) / std::sqrt(8.0 * lab.omegaF * lab.gamma * dw);
    s.Xi = 8.0 * lab.omegaF * lab.omegaF * dw * dw / (27.0 * lab.gamma);
    return s;
}

LabParams from_scaled(const ScaledParams& s, double Gamma, double nbar) {
    if (s.K != 3) throw ModelValidityError("only K = 3 has a closed-form scaling");
    if (!(s.lambda > 0.0) || !(s.C > 0.0) || !(s.Xi > 0.0) || !(s.delta_omega > 0.0)) {
        throw ModelValidityError("scaled parameters require lambda, C, Xi, delta_omega > 0");
    }
    LabParams lab;
    lab.omegaF = 3.0 * s.Xi / (s.delta_omega * s.C * s.C);
    lab.omega0 = lab.omegaF / 3.0 - s.delta_omega;
    lab.gamma = 8.0 * lab.omegaF * s.delta_omega / (9.0 * s.C * s.C);
    lab.hbar = s.lambda * lab.omegaF * s.C * s.C / 3.0;
    lab.F = s.f * std::sqrt(8.0 * lab.omegaF * lab.gamma * s.delta_omega);
    lab.Gamma = Gamma;
    lab.nbar = nbar;
    return lab;
}

double linear_drive_equivalent(double Fprime, const LabParams& lab) {
    if (!(lab.omega0 > 0.0)) throw ModelValidityError("omega0 must be positive");
    return 3.0 * lab.gamma * Fprime / (8.0 * lab.omega0 * lab.omega0);
}

DriveSensitivity drive_sensitivity(const LabParams& lab) {
    const ScaledParams s = to_scaled(lab);
    const double dw = s.delta_omega;
    const double denom = std::sqrt(8.0 * lab.omegaF * lab.gamma * dw);
    const double sign = lab.F < 0.0 ? -1.0 : 1.0;
    DriveSensitivity d;
    d.df_dF = sign / denom;
    d.df_dgamma = -s.f / (2.0 * lab.gamma);
    // omegaF enters both explicitly and through delta_omega (d dw / d omegaF = 1/3).
    d.df_domegaF = -0.5 * s.f * (1.0 / lab.omegaF + 1.0 / (3.0 * dw));
    d.df_domega0 = 0.5 * s.f / dw;
    return d;
}

LabParams lab_for_scaled(double f, double lambda, double detuning_ratio, double omega0,
                         double hbar) {
    if (!(detuning_ratio > 0.0) || !(detuning_ratio < 1.0 / 3.0)) {
        throw ModelValidityError("detuning ratio must lie in (0, 1/3)");
    }
    if (!(lambda > 0.0)) throw ModelValidityError("lambda must be positive");
    LabParams lab;
    lab.omega0 = omega0;
    lab.hbar = hbar;
    lab.omegaF = omega0 / (1.0 / 3.0 - detuning_ratio);
    const double dw = lab.omegaF * detuning_ratio;
    lab.gamma = lambda * 8.0 * lab.omegaF * lab.omegaF * dw / (27.0 * hbar);
    lab.F = f * std::sqrt(8.0 * lab.omegaF * lab.gamma * dw);
    return lab;
}

}  // namespace tripler
