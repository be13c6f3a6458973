#include "tripler/dissipation.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tripler/params.hpp"

namespace tripler::dissipation {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void hermitize(ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        m(j, j) = m(j, j).real();
        for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
            const cd h = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = h;
            m(j, i) = std::conj(h);
        }
    }
}

}  // namespace

LindbladGenerator::LindbladGenerator(const ComplexMatrix& H_over_hbar, double Gamma, double nbar)
    : dim_(static_cast<int>(H_over_hbar.rows())), Gamma_(Gamma), nbar_(nbar) {
    if (H_over_hbar.rows() != H_over_hbar.cols() || dim_ < 2) {
        throw std::invalid_argument("LindbladGenerator: H must be square with dim >= 2");
    }
    if (Gamma < 0.0 || nbar < 0.0) throw ModelValidityError("Gamma and nbar must be non-negative");
    const double scale = std::max(1.0, H_over_hbar.cwiseAbs().maxCoeff());
    if (fock::hermiticity_error(H_over_hbar) > 1e-12 * scale) {
        throw std::invalid_argument("LindbladGenerator: H is not Hermitian");
    }
    // H is stored by its nonzero diagonals: (H rho)(i, :) += H(i, i + o) rho(i + o, :).
    for (int o = 1 - dim_; o < dim_; ++o) {
        const ComplexVector diag = H_over_hbar.diagonal(o);
        if (diag.cwiseAbs().maxCoeff() > 1e-300) diagonals_.emplace_back(o, diag);
    }
    root_ = Eigen::VectorXd::LinSpaced(dim_, 0.0, dim_ - 1.0).cwiseSqrt();
    const Eigen::VectorXd w = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(H_over_hbar, Eigen::EigenvaluesOnly)
                                  .eigenvalues();
    bound_ = (w.maxCoeff() - w.minCoeff()) + 4.0 * Gamma * (2.0 * nbar + 1.0) * dim_;
}

ComplexMatrix LindbladGenerator::rhs(const ComplexMatrix& rho) const {
    const int d = dim_;
    ComplexMatrix hr = ComplexMatrix::Zero(d, d);
    for (const auto& [o, diag] : diagonals_) {
        const auto m = static_cast<Eigen::Index>(diag.size());
        if (o >= 0)
            hr.topRows(m) += diag.asDiagonal() * rho.bottomRows(m);
        else
            hr.bottomRows(m) += diag.asDiagonal() * rho.topRows(m);
    }
    // [H, rho] = H rho - (H rho)^dagger for Hermitian H and rho.
    ComplexMatrix out = cd(0.0, -1.0) * (hr - hr.adjoint());
    if (Gamma_ == 0.0) return out;

    const double up = nbar_ + 1.0;
    for (int j = 0; j < d; ++j) {
        // a a^dagger is diag(n + 1) except for the last retained level.
        const double mj = j + 1 < d ? j + 1.0 : 0.0;
        for (int i = 0; i < d; ++i) {
            const double mi = i + 1 < d ? i + 1.0 : 0.0;
            cd acc = up * (static_cast<double>(i + j) * rho(i, j));
            if (i + 1 < d && j + 1 < d) acc -= up * 2.0 * root_[i + 1] * root_[j + 1] * rho(i + 1, j + 1);
            if (nbar_ != 0.0) {
                acc += nbar_ * ((mi + mj) * rho(i, j));
                if (i > 0 && j > 0) acc -= nbar_ * 2.0 * root_[i] * root_[j] * rho(i - 1, j - 1);
            }
            out(i, j) -= Gamma_ * acc;
        }
    }
    return out;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& H, double Gamma, double nbar,
                           double hbar) {
    return LindbladGenerator(H / hbar, Gamma, nbar).rhs(rho);
}

ComplexMatrix evolve(const ComplexMatrix& rho0, const LindbladGenerator& gen, const EvolveOptions& opts,
                     const Observer& observer) {
    if (rho0.rows() != gen.dim() || rho0.cols() != gen.dim()) {
        throw std::invalid_argument("evolve: state and generator dimensions differ");
    }
    if (!(opts.T >= 0.0)) throw std::invalid_argument("evolve: T must be non-negative");
    const double dt_req = opts.dt > 0.0 ? opts.dt : 0.2 / gen.spectral_bound();
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(opts.T / dt_req - 1e-9)));
    const double dt = opts.T / steps;
    const int every = std::max(1, opts.record_every);

    ComplexMatrix rho = rho0;
    hermitize(rho);
    auto trace_err = [](const ComplexMatrix& r) { return std::abs(r.trace() - cd(1.0, 0.0)); };
    if (observer) observer(0.0, rho, trace_err(rho));
    if (opts.T == 0.0) return rho;

    ComplexMatrix stage, sum;
    for (long s = 1; s <= steps; ++s) {
        ComplexMatrix k = gen.rhs(rho);
        sum = k;
        stage = rho + (0.5 * dt) * k;
        k = gen.rhs(stage);
        sum += 2.0 * k;
        stage = rho + (0.5 * dt) * k;
        k = gen.rhs(stage);
        sum += 2.0 * k;
        stage = rho + dt * k;
        sum += gen.rhs(stage);
        rho += (dt / 6.0) * sum;
        hermitize(rho);

        const double terr = trace_err(rho);
        if (terr > 1e-6) {
            throw ConvergenceError("evolve: trace drifted by " + std::to_string(terr) + " at t = " +
                                   std::to_string(s * dt) + "; reduce dt");
        }
        if (s % every == 0 || s == steps) {
            if (opts.check_positivity) {
                const double lo = min_eigenvalue(rho);
                if (lo < -1e-6) {
                    std::ostringstream msg;
                    msg << "evolve: density matrix lost positivity at t = " << s * dt << " (min eigenvalue "
                        << lo << ", dt " << dt << ", dim " << gen.dim() << ")";
                    throw ConvergenceError(msg.str());
                }
            }
            if (observer) observer(s * dt, rho, terr);
        }
    }
    return rho;
}

ComplexMatrix steady_state(const LindbladGenerator& gen) {
    const int d = gen.dim();
    const int n = d * d;
    std::vector<Eigen::Triplet<cd>> entries;
    ComplexMatrix unit = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            unit(i, j) = 1.0;
            const ComplexMatrix col = gen.rhs(unit);
            unit(i, j) = 0.0;
            const int c = i + j * d;
            for (int jj = 0; jj < d; ++jj)
                for (int ii = 0; ii < d; ++ii) {
                    const int r = ii + jj * d;
                    if (r != 0 && col(ii, jj) != cd(0.0, 0.0)) entries.emplace_back(r, c, col(ii, jj));
                }
        }
    }
    for (int i = 0; i < d; ++i) entries.emplace_back(0, i + i * d, cd(1.0, 0.0));
    SparseComplex L(n, n);
    L.setFromTriplets(entries.begin(), entries.end());
    L.makeCompressed();

    Eigen::SparseLU<SparseComplex> lu;
    lu.compute(L);
    if (lu.info() != Eigen::Success) throw ConvergenceError("steady_state: Liouvillian is singular");
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
    b(0) = 1.0;
    const Eigen::VectorXcd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw ConvergenceError("steady_state: solve failed");
    ComplexMatrix rho = Eigen::Map<const ComplexMatrix>(x.data(), d, d);
    hermitize(rho);
    return rho;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix diff = a - b;
    hermitize(diff);
    const Eigen::VectorXd w = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(diff, Eigen::EigenvaluesOnly).eigenvalues();
    return 0.5 * w.cwiseAbs().sum();
}

double purity(const ComplexMatrix& rho) { return (rho * rho).trace().real(); }

double min_eigenvalue(const ComplexMatrix& rho) {
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

ComplexMatrix pure_state(const ComplexVector& psi) {
    const ComplexVector v = psi / psi.norm();
    return v * v.adjoint();
}

const char* to_string(Regime r) { return r == Regime::coherent ? "coherent" : "incoherent"; }

double HoppingModel::max_Omega() const {
    return std::max({std::abs(Omega[0]), std::abs(Omega[1]), std::abs(Omega[2])});
}

HoppingModel hopping_model(double f, double lambda, double delta_omega, double Gamma, double hbar,
                           const wkb::WkbResult& wkb, const std::optional<std::array<double, 3>>& g_triplet) {
    if (!(f > 0.0)) throw ModelValidityError("hopping model needs f > 0");
    if (!(lambda > 0.0) || !(hbar > 0.0)) throw ModelValidityError("lambda and hbar must be positive");
    if (Gamma < 0.0) throw ModelValidityError("Gamma must be non-negative");

    HoppingModel h;
    const double amp = hbar * delta_omega / (2.0 * lambda) * wkb.C_tun;
    h.t_tun = amp * std::exp(cd(-wkb.S_tun, wkb.Phi_tun) / lambda);

    const std::array<double, 3> g = g_triplet ? *g_triplet : wkb.splittings;
    const double scale = delta_omega / lambda;
    h.Omega = {scale * (g[1] - g[0]), scale * (g[2] - g[0]), scale * (g[2] - g[1])};

    if (Gamma > 0.0) {
        const double Q0 = wkb.geo.Q0;
        h.W = lambda * std::norm(h.t_tun) / (hbar * hbar * Gamma * Q0 * Q0);
        h.regime = Gamma / lambda > h.max_Omega() ? Regime::incoherent : Regime::coherent;
    }
    return h;
}

Eigen::Matrix3cd ring_hamiltonian(cd tau) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    for (int m = 0; m < 3; ++m) {
        const int prev = (m + 2) % 3;
        h(m, prev) = tau;
        h(prev, m) = std::conj(tau);
    }
    return h;
}

std::array<double, 3> ring_levels(cd tau) {
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) out[k] = 2.0 * (tau * std::polar(1.0, -2.0 * kPi * k / 3.0)).real();
    return out;
}

Eigen::Matrix3d rate_matrix(double W) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Constant(W);
    r.diagonal().setConstant(-2.0 * W);
    return r;
}

std::array<double, 3> three_state_kinetics(const std::array<double, 3>& p0, double W, double t) {
    const double decay = std::exp(-3.0 * W * t);
    std::array<double, 3> p{};
    for (int m = 0; m < 3; ++m) p[m] = 1.0 / 3.0 + (p0[m] - 1.0 / 3.0) * decay;
    return p;
}

double boltzmann_ratio(double f) {
    const wkb::ClassicalGeometry geo = wkb::geometry(f, 0.0);
    const double base = 1.0 + 2.0 * f * geo.Q0;
    const double ratio = (base - geo.omega_min) / (base + geo.omega_min);
    if (!(ratio > 0.0)) throw ModelValidityError("Boltzmann ratio is not positive at this f");
    return ratio;
}

bool dephasing_block_check(const fock::FockBasis& basis) {
    const ComplexMatrix n = fock::number_operator(basis);
    for (int k = 0; k < basis.K; ++k) {
        const ComplexMatrix p = fock::sector_projector(basis, k);
        if ((p * n - n * p).cwiseAbs().maxCoeff() != 0.0) return false;
    }
    return true;
}

std::array<double, 3> well_populations(const ComplexMatrix& rho, const rwa::IntrawellSet& wells) {
    std::array<double, 3> p{};
    for (int m = 0; m < 3; ++m) {
        const ComplexVector& v = wells.wells[m].amplitudes;
        p[m] = v.dot(rho * v).real();
    }
    return p;
}

cd well_coherence(const ComplexMatrix& rho, const rwa::IntrawellSet& wells, int m, int n) {
    return wells.wells[m].amplitudes.dot(rho * wells.wells[n].amplitudes);
}

CoherenceDecay measure_coherence_decay(double f, double lambda, double Gamma, int n_max) {
    if (!(Gamma > 0.0)) throw ModelValidityError("coherence decay needs Gamma > 0");
    rwa::ScanOptions opts;
    opts.n_max = n_max;
    opts.keep_states = true;
    opts.check_truncation = false;
    const rwa::MultipletRecord rec = rwa::multiplet(f, lambda, opts);
    const rwa::IntrawellSet wells = rwa::intrawell_states(rec.states, f, lambda);

    const fock::FockBasis basis = fock::make_basis(n_max, 3);
    const LindbladGenerator gen(rwa::build_g_full(f, lambda, basis) / lambda, Gamma, 0.0);
    const ComplexVector psi = (wells.wells[0].amplitudes + wells.wells[1].amplitudes) / std::sqrt(2.0);

    const double Q0 = wkb::well_radius(f);
    const double estimate = Gamma * (1.5 * Q0 * Q0 / lambda + 1.0);
    constexpr int kSamples = 60;
    EvolveOptions eo;
    eo.T = 1.5 / estimate;
    const long steps = std::max<long>(kSamples, static_cast<long>(std::ceil(eo.T * gen.spectral_bound())));
    eo.dt = eo.T / static_cast<double>((steps + kSamples - 1) / kSamples * kSamples);
    eo.record_every = static_cast<int>(std::lround(eo.T / eo.dt)) / kSamples;
    eo.check_positivity = false;

    std::vector<double> ts, ys;
    evolve(pure_state(psi), gen, eo, [&](double t, const ComplexMatrix& rho, double) {
        ts.push_back(t);
        ys.push_back(std::log(std::abs(well_coherence(rho, wells, 0, 1))));
    });

    const int n = static_cast<int>(ts.size());
    double mt = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        sty += (ts[i] - mt) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    CoherenceDecay out;
    out.rate = -sty / stt;
    out.r_squared = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
    out.samples = n;
    return out;
}

}  // namespace tripler::dissipation
