#include "tripler/rwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tripler/parallel.hpp"
#include "tripler/params.hpp"
#include "tripler/wkb.hpp"

namespace tripler::rwa {

namespace {

constexpr double kPi = std::numbers::pi;

double diagonal_element(int n, double lambda) {
    const double x = lambda * (2.0 * n + 1.0) - 1.0;
    return 0.25 * x * x;
}

// Coefficient of sqrt((n+1)(n+2)(n+3)) coupling n and n + 3.
double drive_coupling(double f, double lambda) { return -(f / 6.0) * std::pow(2.0 * lambda, 1.5); }

std::array<double, 3> lowest_per_sector(double f, double lambda, int n_max,
                                        std::array<ComplexVector, 3>* states) {
    std::array<double, 3> g{};
    for (const auto& block : solve_sectors(f, lambda, n_max)) {
        g[block.k] = block.eigenvalues(0);
        if (states) (*states)[block.k] = fock::embed(block.eigenvectors.col(0), block.sector, n_max + 1);
    }
    return g;
}

}  // namespace

Eigensystem diagonalize(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("diagonalize: matrix is not square");
    if (m.size() == 0) return {};
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (fock::hermiticity_error(m) > 1e-12 * scale) {
        throw std::invalid_argument("diagonalize: matrix is not Hermitian");
    }
    Eigensystem es;
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real());
        if (solver.info() != Eigen::Success) throw ConvergenceError("diagonalize: eigensolver failed");
        es.values = solver.eigenvalues();
        es.vectors = solver.eigenvectors().cast<std::complex<double>>();
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
        if (solver.info() != Eigen::Success) throw ConvergenceError("diagonalize: eigensolver failed");
        es.values = solver.eigenvalues();
        es.vectors = solver.eigenvectors();
    }
    return es;
}

ComplexMatrix build_g_block(double f, double lambda, const fock::SectorBasis& sector) {
    if (!(lambda > 0.0)) throw ModelValidityError("lambda must be positive");
    if (f < 0.0) throw ModelValidityError("f must be non-negative (the sign is a phase convention)");
    const int d = sector.dim();
    const double c = drive_coupling(f, lambda);
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        const int n = sector.indices[j];
        m(j, j) = diagonal_element(n, lambda);
        if (j + 1 < d) {
            const double x = c * std::sqrt(static_cast<double>(n + 1) * (n + 2) * (n + 3));
            m(j, j + 1) = x;
            m(j + 1, j) = x;
        }
    }
    return m;
}

ComplexMatrix build_g_full(double f, double lambda, const fock::FockBasis& basis) {
    ComplexMatrix m = drive_coupling(f, lambda) * fock::ladder_cubed_elements(basis);
    for (int n = 0; n < basis.dim(); ++n) m(n, n) += diagonal_element(n, lambda);
    return m;
}

SymmetryBlock solve_block(double f, double lambda, const fock::SectorBasis& sector) {
    SymmetryBlock b;
    b.k = sector.k;
    b.f = f;
    b.lambda = lambda;
    b.sector = sector;
    b.matrix = build_g_block(f, lambda, sector);
    Eigensystem es = diagonalize(b.matrix);
    b.eigenvalues = std::move(es.values);
    b.eigenvectors = std::move(es.vectors);
    return b;
}

std::vector<SymmetryBlock> solve_sectors(double f, double lambda, int n_max) {
    const fock::FockBasis basis = fock::make_basis(n_max, 3);
    std::vector<SymmetryBlock> blocks;
    for (const auto& sector : fock::sector_split(basis)) blocks.push_back(solve_block(f, lambda, sector));
    return blocks;
}

int default_nmax(double f, double lambda) {
    const double Q0 = wkb::well_radius(std::abs(f));
    return std::max(60, static_cast<int>(std::ceil(12.0 * Q0 * Q0 / (2.0 * lambda))));
}

double fold_quasienergy(double E, int k, int K, double omegaF, double hbar) {
    if (K < 2) throw std::invalid_argument("fold_quasienergy needs K >= 2");
    const double period = hbar * omegaF;
    double eps = std::fmod(E + period * k / K, period);
    if (eps < 0.0) eps += period;
    if (eps >= period) eps -= period;
    return eps;
}

MultipletRecord multiplet(double f, double lambda, const ScanOptions& opts) {
    MultipletRecord r;
    r.f = f;
    r.lambda = lambda;
    r.n_max = opts.n_max > 0 ? opts.n_max : default_nmax(f, lambda);
    r.g = lowest_per_sector(f, lambda, r.n_max, opts.keep_states ? &r.states : nullptr);
    for (int k = 0; k < 3; ++k) {
        r.splittings[k] = r.g[k] - r.g[0];
        r.quasienergies[k] = fold_quasienergy(opts.detuning_ratio / lambda * r.g[k], k, 3, 1.0, 1.0);
    }
    r.truncation_shift = std::numeric_limits<double>::quiet_NaN();
    if (opts.check_truncation) {
        const auto wider = lowest_per_sector(f, lambda, r.n_max + 6, nullptr);
        double shift = 0.0;
        for (int k = 0; k < 3; ++k) shift = std::max(shift, std::abs(wider[k] - r.g[k]));
        r.truncation_shift = shift;
    }
    return r;
}

std::vector<MultipletRecord> scan_f(const std::vector<double>& f_grid, double lambda,
                                    const ScanOptions& opts) {
    if (!std::is_sorted(f_grid.begin(), f_grid.end())) throw std::invalid_argument("scan_f: grid must ascend");
    std::vector<MultipletRecord> out(f_grid.size());
    parallel_for(f_grid.size(), [&](std::size_t i) { out[i] = multiplet(f_grid[i], lambda, opts); });
    return out;
}

std::vector<Crossing> find_crossings(const std::vector<MultipletRecord>& scan, const ScanOptions& opts) {
    constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    ScanOptions quick = opts;
    quick.keep_states = false;
    quick.check_truncation = false;

    std::vector<Crossing> out;
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
        const auto& lo = scan[i];
        const auto& hi = scan[i + 1];
        for (const auto& [a, b] : pairs) {
            const double da = lo.g[a] - lo.g[b];
            const double db = hi.g[a] - hi.g[b];
            if (da == 0.0) {
                out.push_back({lo.f, a, b});
                continue;
            }
            if (da * db >= 0.0) continue;
            double fa = lo.f, fb = hi.f, ha = da;
            while (fb - fa > 1e-6 * std::max(std::abs(fb), 1e-300)) {
                const double fc = 0.5 * (fa + fb);
                const auto mid = multiplet(fc, lo.lambda, quick);
                const double hc = mid.g[a] - mid.g[b];
                if (hc == 0.0) {
                    fa = fb = fc;
                    break;
                }
                if ((hc < 0.0) == (ha < 0.0)) {
                    fa = fc;
                    ha = hc;
                } else {
                    fb = fc;
                }
            }
            out.push_back({0.5 * (fa + fb), a, b});
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.f < y.f; });
    return out;
}

IntrawellSet intrawell_states(const std::array<ComplexVector, 3>& phi, double f, double lambda) {
    if (f < 0.05) throw ModelValidityError("intrawell states need f >= 0.05 (wells are not separated)");
    const int dim = static_cast<int>(phi[0].size());
    if (phi[1].size() != dim || phi[2].size() != dim) {
        throw std::invalid_argument("intrawell_states: triplet vectors differ in size");
    }
    const double Q0 = wkb::well_radius(f);
    const ComplexVector probe = fock::coherent_state(Q0 / std::sqrt(2.0 * lambda), dim);

    IntrawellSet out;
    for (int k = 0; k < 3; ++k) {
        const std::complex<double> c = probe.dot(phi[k]);  // <probe|phi>
        if (std::abs(c) < 1e-8) {
            throw ConvergenceError("intrawell_states: sector " + std::to_string(k) +
                                   " has no weight at the well; phase cannot be fixed");
        }
        out.phased_triplet[k] = phi[k] * (std::conj(c) / std::abs(c));
    }
    for (int m = 0; m < 3; ++m) {
        ComplexVector psi = ComplexVector::Zero(dim);
        for (int k = 0; k < 3; ++k) {
            const double angle = 2.0 * kPi * m * k / 3.0;
            psi += out.phased_triplet[k] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        psi /= psi.norm();
        out.wells[m] = {m, std::move(psi)};
    }
    for (int m = 0; m < 3; ++m)
        for (int n = m + 1; n < 3; ++n)
            out.max_overlap = std::max(out.max_overlap, std::abs(out.wells[m].amplitudes.dot(out.wells[n].amplitudes)));

    out.localization = std::norm(probe.dot(out.wells[0].amplitudes));
    if (out.localization < 0.5) {
        throw ConvergenceError("intrawell_states: Psi_0 is not localized at the well (overlap " +
                               std::to_string(out.localization) + " < 0.5)");
    }
    return out;
}

}  // namespace tripler::rwa
