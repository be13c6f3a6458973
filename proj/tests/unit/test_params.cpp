#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tripler/params.hpp"

using namespace tripler;

namespace {

// omega0 = 1, omegaF = 3.03 (delta_omega = 0.01), gamma tuned to lambda = 0.3.
LabParams reference_lab() {
    LabParams lab;
    lab.omega0 = 1.0;
    lab.omegaF = 3.03;
    lab.hbar = 1.0;
    const long double dw = 3.03L / 3.0L - 1.0L;
    lab.gamma = static_cast<double>(0.3L * 8.0L * 3.03L * 3.03L * dw / 27.0L);
    lab.F = static_cast<double>(std::sqrt(8.0L * 3.03L * static_cast<long double>(lab.gamma) * dw));
    return lab;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("scaled parameters of the reference oscillator") {
    const LabParams lab = reference_lab();
    CHECK(lab.gamma == doctest::Approx(8.1609e-3).epsilon(1e-4));
    CHECK(lab.F == doctest::Approx(4.4478e-2).epsilon(1e-4));
    const ScaledParams s = to_scaled(lab);
    CHECK(s.K == 3);
    CHECK(rel(s.lambda, 0.3) < 1e-12);
    CHECK(rel(s.f, 1.0) < 1e-12);
    CHECK(rel(s.delta_omega, 0.01) < 1e-12);
}

TEST_CASE("vanishing detuning sends lambda up and C down") {
    LabParams lab = reference_lab();
    double last_lambda = 0.0, last_C = 1e300;
    for (double dw : {1e-2, 1e-4, 1e-6, 1e-8}) {
        lab.omegaF = 3.0 * (lab.omega0 + dw);
        const ScaledParams s = to_scaled(lab);
        CHECK(s.lambda > last_lambda);
        CHECK(s.C < last_C);
        last_lambda = s.lambda;
        last_C = s.C;
    }
    CHECK(last_lambda > 1e5);
}

TEST_CASE("round trip through the scaled description") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        LabParams lab;
        lab.omega0 = 0.5 + u(rng);
        lab.omegaF = 3.0 * lab.omega0 * (1.0 + 0.2 * u(rng) + 1e-3);
        lab.gamma = 1e-3 + u(rng);
        lab.hbar = 0.1 + u(rng);
        lab.F = 0.01 + u(rng);
        const LabParams back = from_scaled(to_scaled(lab));
        CHECK(rel(back.omega0, lab.omega0) < 1e-12);
        CHECK(rel(back.omegaF, lab.omegaF) < 1e-12);
        CHECK(rel(back.gamma, lab.gamma) < 1e-12);
        CHECK(rel(back.hbar, lab.hbar) < 1e-12);
        CHECK(rel(back.F, lab.F) < 1e-12);
    }
}

TEST_CASE("energy scale over hbar equals detuning over lambda") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        LabParams lab;
        lab.omega0 = 0.5 + u(rng);
        lab.omegaF = 3.0 * lab.omega0 * (1.0 + 0.3 * u(rng) + 1e-4);
        lab.gamma = 1e-4 + u(rng);
        lab.hbar = 0.01 + 2.0 * u(rng);
        lab.F = u(rng);
        const ScaledParams s = to_scaled(lab);
        CHECK(rel(s.Xi / lab.hbar, s.rate_per_unit_g()) < 1e-12);
    }
}

TEST_CASE("invalid lab parameters are rejected") {
    LabParams lab = reference_lab();
    lab.omegaF = 2.9;  // delta_omega < 0 with gamma > 0
    CHECK_THROWS_AS(to_scaled(lab), ModelValidityError);
    lab = reference_lab();
    lab.gamma = 0.0;
    CHECK_THROWS_AS(lab.validate(), ModelValidityError);
    lab = reference_lab();
    lab.gamma = -1.0;
    lab.omegaF = 2.9;
    CHECK_THROWS_AS(lab.validate(), ModelValidityError);
    lab = reference_lab();
    lab.Gamma = -0.1;
    CHECK_THROWS_AS(lab.validate(), ModelValidityError);
}

TEST_CASE("sign of F does not change f") {
    LabParams lab = reference_lab();
    const double f = to_scaled(lab).f;
    lab.F = -lab.F;
    CHECK(to_scaled(lab).f == f);
}

TEST_CASE("linear drive equivalent") {
    LabParams lab = reference_lab();
    lab.gamma = 8.1609e-3;
    CHECK(linear_drive_equivalent(0.0, lab) == 0.0);
    CHECK(linear_drive_equivalent(1.0, lab) == doctest::Approx(3.0603e-3).epsilon(1e-4));
    CHECK(linear_drive_equivalent(2.0, lab) == doctest::Approx(2.0 * linear_drive_equivalent(1.0, lab)));
}

TEST_CASE("drive sensitivities match central differences") {
    const LabParams base = reference_lab();
    const DriveSensitivity d = drive_sensitivity(base);
    auto f_of = [](const LabParams& l) { return to_scaled(l).f; };
    auto diff = [&](double LabParams::*field) {
        const double h = 1e-6 * std::abs(base.*field);
        LabParams up = base, dn = base;
        up.*field += h;
        dn.*field -= h;
        return (f_of(up) - f_of(dn)) / (2.0 * h);
    };
    CHECK(d.df_dF == doctest::Approx(diff(&LabParams::F)).epsilon(1e-6));
    CHECK(d.df_dgamma == doctest::Approx(diff(&LabParams::gamma)).epsilon(1e-6));
    CHECK(d.df_domegaF == doctest::Approx(diff(&LabParams::omegaF)).epsilon(1e-5));
    CHECK(d.df_domega0 == doctest::Approx(diff(&LabParams::omega0)).epsilon(1e-5));
}

TEST_CASE("lab realization of scaled parameters") {
    for (double ratio : {1.0 / 303.0, 1.0 / 101.0, 0.05}) {
        const LabParams lab = lab_for_scaled(1.3, 0.2, ratio);
        const ScaledParams s = to_scaled(lab);
        CHECK(rel(s.f, 1.3) < 1e-12);
        CHECK(rel(s.lambda, 0.2) < 1e-12);
        CHECK(rel(s.delta_omega / lab.omegaF, ratio) < 1e-12);
        CHECK(lab.omega0 == 1.0);
    }
    CHECK_THROWS_AS(lab_for_scaled(1.0, 0.3, 0.4), ModelValidityError);
    CHECK_THROWS_AS(lab_for_scaled(1.0, 0.0, 0.01), ModelValidityError);
}
