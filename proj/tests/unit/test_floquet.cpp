#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tripler/floquet.hpp"

using namespace tripler;

namespace {

LabParams harmonic() {
    LabParams lab;
    lab.omega0 = 1.0;
    lab.omegaF = 3.03;
    lab.gamma = 0.0;
    lab.F = 0.0;
    return lab;
}

bool contains(const Eigen::VectorXd& v, double x, double tol) {
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v(i) - x) < tol) return true;
    return false;
}

}  // namespace

TEST_CASE("lab matrix elements are exact up to the last retained level") {
    LabParams lab = lab_for_scaled(1.0, 0.3, 1.0 / 101.0);
    const int n_max = 20;
    const auto h = floquet::make_lab_hamiltonian(lab, n_max);
    const double s = lab.hbar / (2.0 * lab.omega0);
    for (int n : {0, 7, n_max}) {
        const double q4 = s * s * (6.0 * n * n + 6.0 * n + 3.0);
        CHECK(h.h0(n, n) == doctest::Approx(lab.hbar * lab.omega0 * (n + 0.5) + 0.25 * lab.gamma * q4).epsilon(1e-13));
    }
    const double q3_03 = std::pow(s, 1.5) * std::sqrt(6.0);
    CHECK(h.drive(0, 3) == doctest::Approx(-(lab.F / 3.0) * q3_03).epsilon(1e-13));
    const int m = n_max - 3;
    const double q3_top = std::pow(s, 1.5) * std::sqrt((m + 1.0) * (m + 2.0) * (m + 3.0));
    CHECK(h.drive(m, n_max) == doctest::Approx(-(lab.F / 3.0) * q3_top).epsilon(1e-13));
    CHECK(h.period() == doctest::Approx(2.0 * M_PI / lab.omegaF));
    CHECK_THROWS(floquet::make_lab_hamiltonian(lab, 3));
}

TEST_CASE("harmonic oscillator quasienergies") {
    const auto h = floquet::make_lab_hamiltonian(harmonic(), 10);
    const auto mono = floquet::propagate_period(h, 8);
    CHECK(contains(mono.quasienergies, 0.5, 1e-10));
    CHECK(contains(mono.quasienergies, 0.47, 1e-10));
    for (int n = 0; n <= 10; ++n) CHECK(contains(mono.quasienergies, std::fmod(n + 0.5, 3.03), 1e-10));
}

TEST_CASE("undriven anharmonic oscillator folds its static spectrum") {
    LabParams lab = lab_for_scaled(1.0, 0.3, 1.0 / 101.0);
    lab.F = 0.0;
    const auto h = floquet::make_lab_hamiltonian(lab, 30);
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h.h0).eigenvalues();
    const auto mono = floquet::propagate_period(h, 4);
    const double hw = lab.hbar * lab.omegaF;
    std::vector<double> folded, exact;
    for (int i = 0; i < e.size(); ++i) folded.push_back(std::fmod(e(i), hw));
    for (int i = 0; i < mono.quasienergies.size(); ++i) exact.push_back(mono.quasienergies(i));
    std::sort(folded.begin(), folded.end());
    std::sort(exact.begin(), exact.end());
    REQUIRE(folded.size() == exact.size());
    for (std::size_t i = 0; i < folded.size(); ++i) CHECK(std::abs(folded[i] - exact[i]) < 1e-9);
}

TEST_CASE("monodromy is unitary and composes over periods") {
    const LabParams lab = lab_for_scaled(1.0, 0.3, 1.0 / 101.0);
    const auto h = floquet::make_lab_hamiltonian(lab, 40);
    const auto mono = floquet::propagate_period(h, 200);
    CHECK(mono.unitarity_error < 1e-8);
    for (int i = 0; i < mono.quasienergies.size(); ++i) {
        CHECK(mono.quasienergies(i) >= 0.0);
        CHECK(mono.quasienergies(i) < lab.hbar * lab.omegaF);
    }
    const ComplexMatrix three = floquet::propagate(h, 0.0, 3.0 * h.period(), 600);
    CHECK((three - mono.U * mono.U * mono.U).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("midpoint stepping converges at second order or better") {
    const LabParams lab = lab_for_scaled(1.0, 0.3, 1.0 / 101.0);
    const auto h = floquet::make_lab_hamiltonian(lab, 30);
    const double T = h.period();
    const ComplexMatrix ref = floquet::propagate(h, 0.0, T, 1600);
    const double e1 = (floquet::propagate(h, 0.0, T, 50) - ref).norm();
    const double e2 = (floquet::propagate(h, 0.0, T, 100) - ref).norm();
    CHECK(e1 / e2 > 3.5);
}

TEST_CASE("rotating-frame vacuum maps to a squeezed state") {
    const LabParams lab = lab_for_scaled(1.0, 0.3, 0.05);
    const int dim = 40;
    const ComplexMatrix S = floquet::rotating_to_lab_map(lab, dim);
    const ComplexMatrix gram = S.leftCols(20).adjoint() * S.leftCols(20);
    CHECK((gram - ComplexMatrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
    const auto h = floquet::make_lab_hamiltonian(lab, dim - 1);
    const ComplexVector vac = S.col(0);
    const double q2 = (vac.adjoint() * h.q * h.q * vac)(0).real();
    CHECK(q2 == doctest::Approx(lab.hbar / (2.0 * lab.omegaF / 3.0)).epsilon(1e-10));

    LabParams tuned = lab;
    tuned.omegaF = 3.0 * tuned.omega0;
    const ComplexMatrix I = floquet::rotating_to_lab_map(tuned, 10);
    CHECK((I - ComplexMatrix::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("match against the folded rotating-wave triplet") {
    const auto c = floquet::compare_with_rwa(1.0, 0.3, 1.0 / 101.0, 80, 400);
    CHECK(c.step_change < 1e-6);
    CHECK_FALSE(c.report.any_ambiguous);
    for (const auto& r : c.report.rows) {
        CHECK(r.overlap > 0.9);
        CHECK(std::abs(r.residual) < 0.05 * c.scaled.Xi);
    }
    const double hw3 = c.lab.hbar * c.lab.omegaF / 3.0;
    CHECK(c.report.spacing_err < 0.05 * hw3);
    CHECK(c.report.spacing_residual <= c.report.spacing_err + 1e-15);
    CHECK(c.report.max_leakage < 1e-6);

    auto rwa_missing = c.rwa;
    for (auto& s : rwa_missing.states) s.resize(0);
    CHECK_THROWS_AS(floquet::match_to_rwa(c.mono, rwa_missing, c.lab), std::invalid_argument);
}
