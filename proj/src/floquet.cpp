#include "tripler/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tripler::floquet {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPad = 4;

double wrap(double x, double period) {
    double y = std::fmod(x, period);
    if (y > 0.5 * period) y -= period;
    if (y <= -0.5 * period) y += period;
    return y;
}

// Column index of the eigenvector with the largest overlap with probe.
std::pair<int, std::array<double, 2>> best_match(const ComplexMatrix& vectors, const ComplexVector& probe) {
    const Eigen::VectorXd ov = (vectors.adjoint() * probe).cwiseAbs2();
    int best = 0;
    double first = -1.0, second = -1.0;
    for (int i = 0; i < ov.size(); ++i) {
        if (ov(i) > first) {
            second = first;
            first = ov(i);
            best = i;
        } else if (ov(i) > second) {
            second = ov(i);
        }
    }
    return {best, {first, std::max(second, 0.0)}};
}

}  // namespace

double LabHamiltonian::period() const { return kTwoPi / params.omegaF; }

LabHamiltonian make_lab_hamiltonian(const LabParams& params, int n_max) {
    if (n_max < 4) throw std::invalid_argument("lab basis needs n_max >= 4");
    if (!(params.omega0 > 0.0) || !(params.hbar > 0.0) || !(params.omegaF > 0.0)) {
        throw ModelValidityError("omega0, hbar and omegaF must be positive");
    }
    const int d = n_max + 1;
    const int big = d + kPad;
    const ComplexMatrix a = fock::annihilation(big);
    const ComplexMatrix ad = a.adjoint();
    const double xq = std::sqrt(params.hbar / (2.0 * params.omega0));
    const double xp = std::sqrt(params.hbar * params.omega0 / 2.0);
    const Eigen::MatrixXd q = (xq * (a + ad)).real();
    const ComplexMatrix p = cd(0.0, xp) * (ad - a);

    const Eigen::MatrixXd q2 = q * q;
    const Eigen::MatrixXd q3 = q2 * q;
    const Eigen::MatrixXd q4 = q2 * q2;
    const Eigen::MatrixXd p2 = (p * p).real();

    LabHamiltonian h;
    h.params = params;
    h.n_max = n_max;
    h.q = q.topLeftCorner(d, d).cast<cd>();
    h.p = p.topLeftCorner(d, d);
    h.h0 = (0.5 * p2 + 0.5 * params.omega0 * params.omega0 * q2 + 0.25 * params.gamma * q4).topLeftCorner(d, d);
    h.drive = (-(params.F / 3.0) * q3).topLeftCorner(d, d);
    return h;
}

ComplexMatrix propagate(const LabHamiltonian& h, double t0, double t1, int steps) {
    if (steps < 1) throw std::invalid_argument("propagate needs at least one step");
    const int d = h.n_max + 1;
    const double dt = (t1 - t0) / steps;
    ComplexMatrix U = ComplexMatrix::Identity(d, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d);
    ComplexMatrix scaled(d, d);
    for (int s = 0; s < steps; ++s) {
        const double t = t0 + (s + 0.5) * dt;
        solver.compute(h.h0 + std::cos(h.params.omegaF * t) * h.drive);
        if (solver.info() != Eigen::Success) throw ConvergenceError("propagate: eigensolver failed");
        const Eigen::MatrixXd& V = solver.eigenvectors();
        const Eigen::VectorXd& w = solver.eigenvalues();
        for (int j = 0; j < d; ++j) {
            const cd phase = std::polar(1.0, -w(j) * dt / h.params.hbar);
            scaled.col(j) = V.col(j).cast<cd>() * phase;
        }
        const ComplexMatrix step = scaled * V.transpose().cast<cd>();
        U = step * U;
    }
    return U;
}

MonodromyResult propagate_period(const LabHamiltonian& h, int steps) {
    MonodromyResult r;
    r.steps = steps;
    const double tF = h.period();
    r.U = propagate(h, 0.0, tF, steps);
    const int d = static_cast<int>(r.U.rows());
    r.unitarity_error = (r.U.adjoint() * r.U - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();

    Eigen::ComplexEigenSolver<ComplexMatrix> es(r.U);
    if (es.info() != Eigen::Success) throw ConvergenceError("monodromy eigen-decomposition failed");
    r.eigenvectors = es.eigenvectors();
    r.eigenvectors.colwise().normalize();
    r.quasienergies.resize(d);
    const double hw = h.params.hbar * h.params.omegaF;
    for (int j = 0; j < d; ++j) {
        // U psi = exp(-i eps tF / hbar) psi
        double phase = -std::arg(es.eigenvalues()(j));
        if (phase < 0.0) phase += kTwoPi;
        double eps = phase * h.params.hbar / tF;
        if (eps >= hw) eps -= hw;
        r.quasienergies(j) = eps;
    }
    return r;
}

ComplexMatrix rotating_to_lab_map(const LabParams& lab, int dim) {
    // a_rot = cosh(r) a + sinh(r) a^dagger with r = ln(omega_r / omega0) / 2,
    // realized by S = exp(r (a^2 - a^dagger^2) / 2).
    const double omega_r = lab.omegaF / 3.0;
    const double r = 0.5 * std::log(omega_r / lab.omega0);
    const int big = dim + 40;
    const Eigen::MatrixXd a = fock::annihilation(big).real();
    const Eigen::MatrixXd gen = 0.5 * r * (a * a - a.transpose() * a.transpose());
    // gen is real antisymmetric, so i*gen is Hermitian: exp(gen) = V exp(-i mu) V^dagger.
    const ComplexMatrix herm = cd(0.0, 1.0) * gen.cast<cd>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    ComplexMatrix scaled = es.eigenvectors();
    for (int j = 0; j < big; ++j) scaled.col(j) *= std::polar(1.0, -es.eigenvalues()(j));
    const ComplexMatrix S = scaled * es.eigenvectors().adjoint();
    return S.topLeftCorner(dim, dim);
}

double rwa_energy_offset(const LabParams& lab) {
    const ScaledParams s = to_scaled(lab);
    return lab.hbar * lab.omegaF / 6.0 + s.Xi * (s.lambda * s.lambda - 1.0) / 4.0;
}

MatchReport match_to_rwa(const MonodromyResult& mono, const rwa::MultipletRecord& rwa, const LabParams& lab) {
    const ScaledParams s = to_scaled(lab);
    const int d = static_cast<int>(mono.U.rows());
    const double hw = lab.hbar * lab.omegaF;
    const ComplexMatrix S = rotating_to_lab_map(lab, d);
    const double offset = rwa_energy_offset(lab);
    const int top = d - std::max(1, d / 10);

    MatchReport rep;
    for (int k = 0; k < 3; ++k) {
        const ComplexVector& phi = rwa.states[k];
        if (phi.size() == 0) throw std::invalid_argument("match_to_rwa: RWA record carries no states");
        ComplexVector in_lab = ComplexVector::Zero(d);
        const int n = std::min<int>(d, static_cast<int>(phi.size()));
        in_lab.head(n) = phi.head(n);
        in_lab = S * in_lab;

        const auto [idx, ov] = best_match(mono.eigenvectors, in_lab);
        RwaMatch& m = rep.rows[k];
        m.k = k;
        m.index = idx;
        m.overlap = ov[0];
        m.second_overlap = ov[1];
        m.ambiguous = ov[1] > 0.9 * ov[0];
        m.eps_exact = mono.quasienergies(idx);
        m.eps_rwa = rwa::fold_quasienergy(s.Xi * rwa.g[k] + offset, k, 3, lab.omegaF, lab.hbar);
        m.residual = wrap(m.eps_exact - m.eps_rwa, hw);
        m.leakage = mono.eigenvectors.col(idx).tail(d - top).squaredNorm();
        rep.any_ambiguous = rep.any_ambiguous || m.ambiguous;
        rep.max_leakage = std::max(rep.max_leakage, m.leakage);
    }
    for (int k = 0; k < 3; ++k) {
        const int next = (k + 1) % 3;
        rep.spacing_dev_exact[k] = wrap(rep.rows[next].eps_exact - rep.rows[k].eps_exact - hw / 3.0, hw);
        rep.spacing_dev_rwa[k] = s.Xi * (rwa.g[next] - rwa.g[k]);
        rep.spacing_err = std::max(rep.spacing_err, std::abs(rep.spacing_dev_exact[k]));
        rep.spacing_residual =
            std::max(rep.spacing_residual, std::abs(rep.spacing_dev_exact[k] - rep.spacing_dev_rwa[k]));
    }
    return rep;
}

double step_refinement_change(const LabHamiltonian& h, int steps, const std::vector<ComplexVector>& probes) {
    const MonodromyResult coarse = propagate_period(h, steps);
    const MonodromyResult fine = propagate_period(h, 2 * steps);
    const double hw = h.params.hbar * h.params.omegaF;
    double change = 0.0;
    for (const auto& probe : probes) {
        const int a = best_match(coarse.eigenvectors, probe).first;
        const int b = best_match(fine.eigenvectors, probe).first;
        change = std::max(change, std::abs(wrap(coarse.quasienergies(a) - fine.quasienergies(b), hw)));
    }
    return change;
}

FloquetComparison compare_with_rwa(double f, double lambda, double detuning_ratio, int n_max, int steps) {
    return compare_with_rwa(lab_for_scaled(f, lambda, detuning_ratio), n_max, steps);
}

FloquetComparison compare_with_rwa(const LabParams& lab, int n_max, int steps) {
    lab.validate();
    FloquetComparison c;
    c.lab = lab;
    c.scaled = to_scaled(c.lab);
    rwa::ScanOptions opts;
    opts.keep_states = true;
    opts.detuning_ratio = c.scaled.delta_omega / lab.omegaF;
    c.rwa = rwa::multiplet(c.scaled.f, c.scaled.lambda, opts);

    const LabHamiltonian h = make_lab_hamiltonian(c.lab, n_max);
    c.mono = propagate_period(h, steps);
    c.report = match_to_rwa(c.mono, c.rwa, c.lab);

    std::vector<ComplexVector> probes;
    for (const auto& row : c.report.rows) probes.push_back(c.mono.eigenvectors.col(row.index));
    const MonodromyResult fine = propagate_period(h, 2 * steps);
    const double hw = c.lab.hbar * c.lab.omegaF;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const int b = best_match(fine.eigenvectors, probes[i]).first;
        c.step_change = std::max(c.step_change, std::abs(wrap(c.report.rows[i].eps_exact - fine.quasienergies(b), hw)));
    }
    if (c.step_change > 1e-6) {
        throw ConvergenceError("monodromy quasienergies moved by " + std::to_string(c.step_change) +
                               " under step doubling; increase steps");
    }
    return c;
}

}  // namespace tripler::floquet
