#include "tripler/observables.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "tripler/params.hpp"
#include "tripler/rwa.hpp"

namespace tripler::observables {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(fftw_mutex());
        fftw_destroy_plan(p);
    }
};

}  // namespace

RotatingFrame make_rotating_frame(double f, double lambda, int n_max, double delta_omega, double omegaF,
                                  double C) {
    const int d = n_max + 1;
    RotatingFrame fr;
    fr.f = f;
    fr.lambda = lambda;
    fr.rate = delta_omega / lambda;
    fr.omegaF = omegaF;
    fr.C = C;
    fr.energies.resize(d);
    fr.vectors = ComplexMatrix::Zero(d, d);
    int col = 0;
    for (const auto& block : rwa::solve_sectors(f, lambda, n_max)) {
        for (int j = 0; j < block.sector.dim(); ++j, ++col) {
            fr.energies(col) = block.eigenvalues(j);
            fr.vectors.col(col) = fock::embed(block.eigenvectors.col(j), block.sector, d);
            fr.sector_of.push_back(block.k);
            fr.level_in_sector.push_back(j);
        }
    }
    fr.a_eig = fr.vectors.adjoint() * fock::annihilation(d) * fr.vectors;
    return fr;
}

RotatingFrame without_tunneling(const RotatingFrame& frame) {
    RotatingFrame out = frame;
    double mean = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < frame.level_in_sector.size(); ++i)
        if (frame.level_in_sector[i] == 0) {
            mean += frame.energies(i);
            ++count;
        }
    mean /= count;
    for (std::size_t i = 0; i < frame.level_in_sector.size(); ++i)
        if (frame.level_in_sector[i] == 0) out.energies(i) = mean;
    return out;
}

SignalTerms ladder_signal(const RotatingFrame& frame, const ComplexVector& psi) {
    if (psi.size() != frame.vectors.rows()) throw std::invalid_argument("ladder_signal: state dimension mismatch");
    const ComplexVector c = frame.vectors.adjoint() * (psi / psi.norm());
    const int d = static_cast<int>(c.size());
    const double cmax = c.cwiseAbs().maxCoeff();
    SignalTerms s;
    for (int i = 0; i < d; ++i) {
        if (std::abs(c(i)) < 1e-12 * cmax) continue;
        for (int j = 0; j < d; ++j) {
            if (std::abs(c(j)) < 1e-12 * cmax) continue;
            const cd amp = std::conj(c(i)) * c(j) * frame.a_eig(i, j);
            if (std::abs(amp) < 1e-16) continue;
            s.amp.push_back(amp);
            s.nu.push_back(frame.rate * (frame.energies(i) - frame.energies(j)));
        }
    }
    return s;
}

TimeSeries expect_q(const RotatingFrame& frame, const ComplexVector& psi, double t0, double dt, std::size_t n) {
    if (n < 2 || !(dt > 0.0)) throw std::invalid_argument("expect_q: need n >= 2 samples and dt > 0");
    const SignalTerms s = ladder_signal(frame, psi);
    const double pref = frame.C * std::sqrt(2.0 * frame.lambda);
    TimeSeries ts;
    ts.t0 = t0;
    ts.dt = dt;
    ts.label = "expect_q";
    ts.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + dt * static_cast<double>(i);
        cd a = 0.0;
        for (std::size_t j = 0; j < s.amp.size(); ++j) a += s.amp[j] * std::polar(1.0, s.nu[j] * t);
        ts.values[i] = pref * (a * std::polar(1.0, -frame.omegaF * t / 3.0)).real();
    }
    return ts;
}

Period3Score period3_score(const TimeSeries& series, double tF) {
    if (!(tF > 0.0) || !(series.dt > 0.0)) throw std::invalid_argument("period3_score: tF and dt must be positive");
    const double per = tF / series.dt;
    const long shift = std::lround(per);
    if (shift < 1 || std::abs(per - static_cast<double>(shift)) > 1e-9 * per) {
        throw std::invalid_argument("period3_score: tF is not a whole number of samples");
    }
    if (series.span() < 12.0 * tF * (1.0 - 1e-12)) {
        throw std::invalid_argument("period3_score: series spans fewer than 12 drive periods");
    }
    const auto& v = series.values;
    const std::size_t n = v.size();
    auto mismatch = [&](std::size_t lag) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) {
            const double diff = v[i + lag] - v[i];
            num += diff * diff;
            den += v[i] * v[i];
        }
        return den > 0.0 ? std::sqrt(num / den) : 0.0;
    };
    return {mismatch(static_cast<std::size_t>(3 * shift)), mismatch(static_cast<std::size_t>(shift))};
}

SpectralPeaks spectrum(const TimeSeries& series, std::optional<double> target_omega, std::size_t max_peaks) {
    const std::size_t n = series.size();
    if (n < 4 || !(series.dt > 0.0)) throw std::invalid_argument("spectrum: need >= 4 uniform samples");
    std::vector<double> in(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)));
        in[i] = w * series.values[i];
    }
    const std::size_t m = n / 2 + 1;
    std::vector<fftw_complex> out(m);
    std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
    {
        std::lock_guard lock(fftw_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE));
    }
    if (!plan) throw ConvergenceError("spectrum: FFT planning failed");
    fftw_execute(plan.get());

    SpectralPeaks sp;
    sp.bin_width = 1.0 / (static_cast<double>(n) * series.dt);
    sp.freq.resize(m);
    sp.weight.resize(m);
    const double nn = static_cast<double>(n);
    double spectral_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double p = out[k][0] * out[k][0] + out[k][1] * out[k][1];
        const bool edge = k == 0 || (n % 2 == 0 && k == m - 1);
        sp.freq[k] = static_cast<double>(k) * sp.bin_width;
        sp.weight[k] = (edge ? 1.0 : 2.0) * p / (nn * nn);
        spectral_sum += (edge ? 1.0 : 2.0) * p;
    }
    double energy = 0.0;
    for (double x : in) energy += x * x;
    sp.parseval_error = energy > 0.0 ? std::abs(spectral_sum / nn - energy) / energy : 0.0;

    for (std::size_t k = 1; k + 1 < m; ++k) {
        const double w = sp.weight[k];
        if (w > sp.weight[k - 1] && w >= sp.weight[k + 1] && w > 0.0) {
            // Parabola through the log-weights of the three bins.
            const double a = std::log(std::max(sp.weight[k - 1], 1e-300));
            const double b = std::log(w);
            const double c = std::log(std::max(sp.weight[k + 1], 1e-300));
            const double den = a - 2.0 * b + c;
            const double off = den != 0.0 ? std::clamp(0.5 * (a - c) / den, -0.5, 0.5) : 0.0;
            sp.peaks.push_back({(static_cast<double>(k) + off) * sp.bin_width, w, k});
        }
    }
    std::stable_sort(sp.peaks.begin(), sp.peaks.end(),
                     [](const Peak& x, const Peak& y) { return x.weight > y.weight; });
    if (sp.peaks.size() > max_peaks) sp.peaks.resize(max_peaks);

    if (target_omega && *target_omega != 0.0 && series.span() < 4.0 / std::abs(*target_omega)) {
        sp.warnings.push_back("window of " + std::to_string(series.span()) +
                              " is shorter than 4/|Omega| = " + std::to_string(4.0 / std::abs(*target_omega)) +
                              "; the splitting is not resolved");
    }
    return sp;
}

}  // namespace tripler::observables
