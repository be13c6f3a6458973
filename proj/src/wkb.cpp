#include "tripler/wkb.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tripler/params.hpp"

namespace tripler::wkb {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// g(Q, 0) - g_min with the double root at Q0 factored out.
double axis_excess(double Q, const ClassicalGeometry& geo) {
    const double f = geo.f;
    const double Q0 = geo.Q0;
    const double quad = Q * Q + (2.0 * Q0 - 4.0 * f / 3.0) * Q + 3.0 * Q0 * Q0 - 8.0 * f * Q0 / 3.0 - 2.0;
    return 0.25 * (Q - Q0) * (Q - Q0) * quad;
}

template <int Points, class Fn>
double gk(Fn&& fn, double a, double b, double* err) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, Points>::integrate(fn, a, b, 12, 1e-12, err);
}

// Integral of fn over [lo, hi] with square-root endpoint behaviour removed by
// Q = lo + u^2 on the left half and Q = hi - u^2 on the right half. Below
// u = sqrt(clip) the substituted integrand is frozen at its value there, so
// it stays smooth whether fn is finite or ~ 1/sqrt at the end.
template <int Points, class Fn>
double integrate_substituted(const Fn& fn, double lo, double hi, double clip_lo, double clip_hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = std::sqrt(mid - lo);
    const double u_lo = std::sqrt(clip_lo);
    const double u_hi = std::sqrt(clip_hi);
    double err = 0.0;
    const double left = gk<Points>([&](double u) {
        const double v = std::max(u, u_lo);
        return 2.0 * v * fn(lo + v * v);
    }, 0.0, half, &err);
    const double right = gk<Points>([&](double u) {
        const double v = std::max(u, u_hi);
        return 2.0 * v * fn(hi - v * v);
    }, 0.0, half, &err);
    return left + right;
}

// Converged value; node doubling (15 -> 31 point rule) must agree to 1e-8.
template <class Fn>
double checked_integral(const Fn& fn, double lo, double hi, const std::string& name) {
    // Rounding in fn grows like eps / distance near an end (divergent terms
    // cancel there); freezing the last 1e-10 of the range costs far less.
    const double clip = 1e-10 * (hi - lo);
    const double coarse = integrate_substituted<15>(fn, lo, hi, clip, clip);
    const double fine = integrate_substituted<31>(fn, lo, hi, clip, clip);
    if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-8 * std::max(1.0, std::abs(fine))) {
        throw ConvergenceError("quadrature for " + name + " did not converge (15-point " +
                               std::to_string(coarse) + " vs 31-point " + std::to_string(fine) + ")");
    }
    return fine;
}

}  // namespace

double well_radius(double f) { return 0.5 * (f + std::sqrt(f * f + 4.0)); }

ClassicalGeometry geometry(double f, double lambda) {
    if (!(f > 0.0)) throw ModelValidityError("WKB geometry needs f > 0 (the f = 0 ring has no wells)");
    if (!(lambda >= 0.0)) throw ModelValidityError("lambda must be non-negative");
    ClassicalGeometry g;
    g.f = f;
    g.lambda = lambda;
    g.Q0 = well_radius(f);
    g.Q1 = g.Q2 = -0.5 * g.Q0;
    g.P0 = 0.0;
    g.P1 = 0.5 * std::sqrt(3.0) * g.Q0;
    g.P2 = -g.P1;
    g.g_min = -f * g.Q0 * (g.Q0 * g.Q0 + 3.0) / 12.0;
    g.omega_min = std::sqrt(3.0 * f * g.Q0 * (g.Q0 * g.Q0 + 1.0));
    g.Q_B = g.Q0 - 0.75 * f;
    g.g0 = g.g_min + 0.5 * lambda * g.omega_min;
    return g;
}

double g_on_axis(double Q, double f) {
    const double r = Q * Q - 1.0;
    return 0.25 * r * r - f * Q * Q * Q / 3.0;
}

double A_coefficient(double Q, double f) { return 1.0 - Q * Q - 2.0 * f * Q; }

double B_coefficient(double Q, double f, double g0) {
    const double A = A_coefficient(Q, f);
    return A * A - 4.0 * (g_on_axis(Q, f) - g0);
}

double B_classical(double Q, const ClassicalGeometry& geo) {
    return (16.0 * geo.f / 3.0) * (Q - geo.Q1) * (Q - geo.Q1) * (Q - geo.Q_B);
}

MomentumBranch momentum_branch(double Q, double f, double lambda, double g0) {
    const ClassicalGeometry geo = geometry(f, lambda);
    const double slack = 1e-12 * geo.Q0;
    if (Q < geo.Q1 - slack || Q > geo.Q0 + slack) {
        throw std::out_of_range("momentum_branch: Q outside [Q1, Q0]");
    }
    const double A = A_coefficient(Q, f);
    const double B = B_coefficient(Q, f, g0);
    MomentumBranch m;
    if (B >= 0.0) {
        m.sqrtB = std::sqrt(B);
        const double w = A + std::sqrt(B);
        m.P = w <= 0.0 ? cd(0.0, -std::sqrt(-w)) : cd(std::sqrt(w), 0.0);
    } else {
        m.sqrtB = cd(0.0, std::sqrt(-B));
        m.P = -std::sqrt(cd(A, std::sqrt(-B)));
    }
    m.dg_dP = m.P * m.sqrtB;
    return m;
}

MomentumBranch classical_momentum(double Q, const ClassicalGeometry& geo) {
    const double A = A_coefficient(Q, geo.f);
    const double B = B_classical(Q, geo);
    MomentumBranch m;
    if (Q >= geo.Q_B) {
        const double sB = std::sqrt(std::max(B, 0.0));
        // -A - sqrt(B) = (A^2 - B) / (sqrt(B) - A) with A^2 - B = 4 [g(Q,0) - g_min].
        const double mod2 = 4.0 * axis_excess(Q, geo) / (sB - A);
        m.sqrtB = sB;
        m.P = cd(0.0, -std::sqrt(std::max(mod2, 0.0)));
    } else {
        const double absB = -B;
        const double r = std::sqrt(A * A + absB);
        const double r_plus = A >= 0.0 ? r + A : absB / (r - A);
        const double r_minus = A >= 0.0 ? absB / (r + A) : r - A;
        m.sqrtB = cd(0.0, std::sqrt(absB));
        m.P = cd(-std::sqrt(0.5 * r_plus), -std::sqrt(0.5 * r_minus));
    }
    m.dg_dP = m.P * m.sqrtB;
    return m;
}

double WkbResult::phase_mod_pi() const {
    const double x = std::fmod(Phi_tun / geo.lambda, kPi);
    return x < 0.0 ? x + kPi : x;
}

double WkbResult::envelope() const { return std::abs(C_tun) * std::exp(-S_tun / geo.lambda); }

WkbResult tunnel_quantities(double f, double lambda) {
    if (!(lambda > 0.0)) throw ModelValidityError("lambda must be positive");
    WkbResult r;
    r.geo = geometry(f, lambda);
    const ClassicalGeometry& g = r.geo;

    auto imP = [&](double Q) { return classical_momentum(Q, g).P.imag(); };
    auto reP = [&](double Q) { return classical_momentum(Q, g).P.real(); };
    // Y(Q, Qm) = omega_min / (2 P_cl B_cl^{1/2}) - i / (2 |Q - Qm|)
    auto Y = [&](double Q, double Qm) {
        const MomentumBranch m = classical_momentum(Q, g);
        return g.omega_min / (2.0 * m.dg_dP) - cd(0.0, 0.5 / std::abs(Q - Qm));
    };

    // Orientation: the limits run from Q0 down to Q1.
    const double s_upper = checked_integral(imP, g.Q_B, g.Q0, "S_tun (Q_B..Q0)");
    const double s_lower = checked_integral(imP, g.Q1, g.Q_B, "S_tun (Q1..Q_B)");
    r.S_classical = -(s_upper + s_lower);
    r.Phi_classical = -checked_integral(reP, g.Q1, g.Q_B, "Phi_tun (Q1..Q_B)");

    const double k_re_upper = checked_integral([&](double Q) { return Y(Q, g.Q0).real(); }, g.Q_B, g.Q0, "Re K_tun (Q_B..Q0)");
    const double k_im_upper = checked_integral([&](double Q) { return Y(Q, g.Q0).imag(); }, g.Q_B, g.Q0, "Im K_tun (Q_B..Q0)");
    const double k_re_lower = checked_integral([&](double Q) { return Y(Q, g.Q1).real(); }, g.Q1, g.Q_B, "Re K_tun (Q1..Q_B)");
    const double k_im_lower = checked_integral([&](double Q) { return Y(Q, g.Q1).imag(); }, g.Q1, g.Q_B, "Im K_tun (Q1..Q_B)");
    r.K_tun = -cd(k_re_upper + k_re_lower, k_im_upper + k_im_lower);

    const double Q0sq = g.Q0 * g.Q0;
    const cd beta = cd(2.0 * g.omega_min, std::sqrt(3.0) * (f * g.Q0 - 1.0)) / (3.0 * Q0sq);
    r.theta1 = 0.5 * std::arg(beta + 1.0) + g.P1 * g.Q1 / (2.0 * lambda);

    r.S_tun = r.S_classical + lambda * r.K_tun.imag();
    r.Phi_tun = r.Phi_classical + lambda * r.K_tun.real() + lambda * r.theta1;
    r.C_tun = -1.5 * std::sqrt(lambda) * g.omega_min *
              std::pow(2.0 * (Q0sq + 1.0) / (3.0 * kPi * kPi * Q0sq), 0.25) *
              std::sqrt(f * (2.0 * g.Q0 - f));

    for (int k = 0; k < 3; ++k) r.splittings[k] = splitting(r, k);
    return r;
}

double splitting(const WkbResult& w, int k) {
    const double lambda = w.geo.lambda;
    return w.C_tun * std::exp(-w.S_tun / lambda) * std::cos(w.Phi_tun / lambda - 2.0 * kPi * k / 3.0);
}

std::array<int, 2> crossing_pair(long m) {
    switch (((m % 3) + 3) % 3) {
        case 1: return {0, 1};
        case 2: return {0, 2};
        default: return {1, 2};
    }
}

std::vector<WkbCrossing> crossing_locations(double f_lo, double f_hi, double lambda, int samples) {
    if (!(f_lo > 0.0) || !(f_hi > f_lo)) throw std::invalid_argument("crossing_locations needs 0 < f_lo < f_hi");
    if (samples < 2) samples = 2;
    auto phase = [&](double f) { return tunnel_quantities(f, lambda).Phi_tun / lambda; };

    std::vector<double> fs(samples);
    std::vector<double> xs(samples);
    for (int i = 0; i < samples; ++i) {
        fs[i] = f_lo + (f_hi - f_lo) * i / (samples - 1);
        xs[i] = phase(fs[i]);
    }

    std::vector<WkbCrossing> out;
    const double cell = kPi / 3.0;
    for (int i = 0; i + 1 < samples; ++i) {
        const long ma = static_cast<long>(std::floor(xs[i] / cell));
        const long mb = static_cast<long>(std::floor(xs[i + 1] / cell));
        if (ma == mb) continue;
        const long lo = std::min(ma, mb) + 1;
        const long hi = std::max(ma, mb);
        for (long m = lo; m <= hi; ++m) {
            const double target = m * cell;
            double a = fs[i], b = fs[i + 1];
            double ha = xs[i] - target;
            while (b - a > 1e-9 * b) {
                const double c = 0.5 * (a + b);
                const double hc = phase(c) - target;
                if ((hc < 0.0) == (ha < 0.0)) {
                    a = c;
                    ha = hc;
                } else {
                    b = c;
                }
            }
            const auto pair = crossing_pair(m);
            out.push_back({0.5 * (a + b), m, pair[0], pair[1]});
        }
    }
    std::sort(out.begin(), out.end(), [](const WkbCrossing& x, const WkbCrossing& y) { return x.f < y.f; });
    return out;
}

}  // namespace tripler::wkb
