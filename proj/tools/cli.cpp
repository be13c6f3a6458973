#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "tripler/config.hpp"
#include "tripler/csv.hpp"
#include "tripler/dissipation.hpp"
#include "tripler/floquet.hpp"
#include "tripler/observables.hpp"
#include "tripler/params.hpp"
#include "tripler/parallel.hpp"
#include "tripler/rwa.hpp"
#include "tripler/wkb.hpp"

namespace tripler::cli {

namespace {

namespace fs = std::filesystem;
using csv::Cell;

constexpr double kPi = std::numbers::pi;
const std::vector<std::string> kModes{"convert", "spectrum", "scan",      "wkb",
                                      "compare", "monodromy", "dissipate", "observe"};

struct Table {
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
    std::string manifest;
};

struct Settings {
    std::string mode;
    fs::path out = "tripler_out";
    std::optional<ParamsInput> params;
    std::optional<double> f_min, f_max;
    std::optional<int> f_points;
    int nmax = 0;
    int steps = 3000;
    double detuning = 1.0 / 303.0;
    double t_max = 0.0;
    double dt = 0.0;
    int periods = 30;
    int samples_per_period = 8;
    int levels = 4;
    bool no_tunneling = false;
};

struct Result {
    std::vector<Table> tables;
    std::string summary;
};

std::string fmt(double x) { return csv::format_double(x); }

template <class T>
std::optional<T> json_get(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

// ---- parameter resolution -------------------------------------------------

ScaledInput scaled_view(const Settings& s) {
    if (!s.params) return ScaledInput{};
    if (const auto* sc = std::get_if<ScaledInput>(&*s.params)) return *sc;
    const LabParams& lab = std::get<LabParams>(*s.params);
    const ScaledParams p = to_scaled(lab);
    return {p.f, p.lambda, p.delta_omega, lab.hbar, lab.Gamma, lab.nbar};
}

LabParams lab_view(const Settings& s) {
    if (s.params)
        if (const auto* lab = std::get_if<LabParams>(&*s.params)) {
            lab->validate();
            return *lab;
        }
    const ScaledInput sc = scaled_view(s);
    const double omegaF = sc.delta_omega / s.detuning;
    LabParams lab = lab_for_scaled(sc.f, sc.lambda, s.detuning, omegaF / 3.0 - sc.delta_omega, sc.hbar);
    lab.Gamma = sc.Gamma;
    lab.nbar = sc.nbar;
    return lab;
}

std::vector<double> f_grid(const Settings& s, double lo, double hi, int points) {
    const double a = s.f_min.value_or(lo);
    const double b = s.f_max.value_or(hi);
    const int n = s.f_points.value_or(points);
    if (n < 1) throw ConfigError("f_points must be at least 1");
    if (b < a) throw ConfigError("f_max must not be below f_min");
    if (a < 0.0) throw ConfigError("f_min must be non-negative");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return g;
}

csv::Parameters describe(const Settings& s) {
    csv::Parameters p{{"mode", s.mode}};
    if (s.params) {
        if (const auto* lab = std::get_if<LabParams>(&*s.params)) {
            p.insert(p.end(), {{"omega0", fmt(lab->omega0)},
                               {"omegaF", fmt(lab->omegaF)},
                               {"gamma", fmt(lab->gamma)},
                               {"F", fmt(lab->F)}});
        }
    }
    const ScaledInput sc = scaled_view(s);
    // grid modes take f from f_min .. f_max
    if (s.mode != "scan" && s.mode != "wkb" && s.mode != "compare") p.emplace_back("f", fmt(sc.f));
    p.insert(p.end(), {{"lambda", fmt(sc.lambda)},
                       {"delta_omega", fmt(sc.delta_omega)},
                       {"hbar", fmt(sc.hbar)},
                       {"Gamma", fmt(sc.Gamma)},
                       {"nbar", fmt(sc.nbar)}});
    if (s.f_min) p.emplace_back("f_min", fmt(*s.f_min));
    if (s.f_max) p.emplace_back("f_max", fmt(*s.f_max));
    if (s.f_points) p.emplace_back("f_points", std::to_string(*s.f_points));
    p.insert(p.end(), {{"nmax", std::to_string(s.nmax)},
                       {"steps", std::to_string(s.steps)},
                       {"detuning", fmt(s.detuning)},
                       {"t_max", fmt(s.t_max)},
                       {"dt", fmt(s.dt)},
                       {"periods", std::to_string(s.periods)},
                       {"samples_per_period", std::to_string(s.samples_per_period)},
                       {"levels", std::to_string(s.levels)},
                       {"no_tunneling", s.no_tunneling ? "1" : "0"}});
    return p;
}

std::string pair_label(int a, int b) { return std::to_string(a) + "-" + std::to_string(b); }

// ---- modes ----------------------------------------------------------------

Result mode_convert(const Settings& s) {
    const LabParams lab = lab_view(s);
    const ScaledParams sc = to_scaled(lab);
    Table t{"convert.csv",
            {"omega0", "omegaF", "gamma", "F", "hbar", "f", "lambda", "delta_omega", "C", "Xi"},
            {{lab.omega0, lab.omegaF, lab.gamma, lab.F, lab.hbar, sc.f, sc.lambda, sc.delta_omega, sc.C, sc.Xi}},
            ""};
    std::ostringstream o;
    o << "f = " << fmt(sc.f) << "\nlambda = " << fmt(sc.lambda) << "\ndelta_omega = " << fmt(sc.delta_omega)
      << "\nC = " << fmt(sc.C) << "\nXi = " << fmt(sc.Xi) << '\n';
    return {{t}, o.str()};
}

Result mode_spectrum(const Settings& s) {
    const ScaledInput sc = scaled_view(s);
    const int n_max = s.nmax > 0 ? s.nmax : rwa::default_nmax(sc.f, sc.lambda);
    if (s.levels < 1) throw ConfigError("levels must be at least 1");
    Table t{"spectrum.csv", {"f", "lambda", "k", "level", "g", "eps_over_hbar_omegaF"}, {}, ""};
    std::ostringstream o;
    for (const auto& block : rwa::solve_sectors(sc.f, sc.lambda, n_max)) {
        const int n = std::min<int>(s.levels, static_cast<int>(block.eigenvalues.size()));
        for (int j = 0; j < n; ++j) {
            const double g = block.eigenvalues(j);
            const double eps = rwa::fold_quasienergy(s.detuning / sc.lambda * g, block.k, 3, 1.0, 1.0);
            t.rows.push_back({sc.f, sc.lambda, static_cast<long>(block.k), static_cast<long>(j), g, eps});
        }
        o << "k = " << block.k << ": lowest g = " << fmt(block.eigenvalues(0)) << '\n';
    }
    return {{t}, o.str()};
}

void append_wkb_crossings(Table& t, double lo, double hi, double lambda) {
    const double a = std::max(lo, 0.5);
    if (hi <= a) return;
    for (const auto& c : wkb::crossing_locations(a, hi, lambda))
        t.rows.push_back({c.f, pair_label(c.k_a, c.k_b), std::string("wkb")});
}

Result mode_scan(const Settings& s) {
    const ScaledInput sc = scaled_view(s);
    const auto grid = f_grid(s, 0.0, 0.35, 200);
    rwa::ScanOptions opts;
    opts.n_max = s.nmax;
    opts.detuning_ratio = s.detuning;
    const auto scan = rwa::scan_f(grid, sc.lambda, opts);

    Table levels{"scan.csv", {"f", "lambda", "k", "g_k", "eps_over_hbar_omegaF"}, {},
                 "lowest level of each symmetry sector vs f: level ordering at f = 0 and triplet formation"};
    double worst = 0.0;
    for (const auto& r : scan) {
        for (int k = 0; k < 3; ++k) levels.rows.push_back({r.f, r.lambda, static_cast<long>(k), r.g[k], r.quasienergies[k]});
        worst = std::max(worst, r.truncation_shift);
    }
    Table cross{"crossings.csv", {"f_cross", "k_pair", "method"}, {},
                "crossing points of the tunnel-split triplet, numeric and semiclassical"};
    for (const auto& c : rwa::find_crossings(scan, opts))
        cross.rows.push_back({c.f, pair_label(c.k_a, c.k_b), std::string("numeric")});
    append_wkb_crossings(cross, grid.front(), grid.back(), sc.lambda);

    std::ostringstream o;
    o << grid.size() << " points, largest truncation shift " << fmt(worst) << ", "
      << cross.rows.size() << " crossings\n";
    return {{levels, cross}, o.str()};
}

std::vector<wkb::WkbResult> wkb_grid(const std::vector<double>& grid, double lambda) {
    if (grid.front() <= 0.0) throw ConfigError("semiclassical modes need f_min > 0");
    std::vector<wkb::WkbResult> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { out[i] = wkb::tunnel_quantities(grid[i], lambda); });
    return out;
}

Result mode_wkb(const Settings& s) {
    const ScaledInput sc = scaled_view(s);
    const auto grid = f_grid(s, 0.5, 3.0, 100);
    const auto res = wkb_grid(grid, sc.lambda);
    Table t{"wkb.csv", {"f", "lambda", "S_tun", "Phi_tun", "C_tun", "theta1", "split_k0", "split_k1", "split_k2"}, {},
            "semiclassical tunneling exponent, phase, prefactor and splittings vs f"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& w = res[i];
        t.rows.push_back({grid[i], sc.lambda, w.S_tun, w.Phi_tun, w.C_tun, w.theta1, w.splittings[0],
                          w.splittings[1], w.splittings[2]});
    }
    return {{t}, std::to_string(grid.size()) + " points\n"};
}

Result mode_compare(const Settings& s) {
    const ScaledInput sc = scaled_view(s);
    const auto grid = f_grid(s, 0.5, 3.0, 100);
    rwa::ScanOptions opts;
    opts.n_max = s.nmax;
    opts.detuning_ratio = s.detuning;
    const auto scan = rwa::scan_f(grid, sc.lambda, opts);
    const auto res = wkb_grid(grid, sc.lambda);

    Table t{"compare.csv", {"f", "lambda", "k", "delta_g_wkb", "delta_g_num", "rel_err_logamp"}, {},
            "numeric vs semiclassical splittings of the lowest triplet (amplitude and phase)"};
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = scan[i];
        const double mean = r.mean();
        double env = 0.0;
        for (int k = 0; k < 3; ++k) env = std::max(env, std::abs(r.g[k] - mean));
        const double logerr = std::log(env) - std::log(res[i].envelope());
        worst = std::max(worst, std::abs(logerr));
        for (int k = 0; k < 3; ++k)
            t.rows.push_back({grid[i], sc.lambda, static_cast<long>(k), res[i].splittings[k], r.g[k] - mean, logerr});
    }
    Table cross{"crossings.csv", {"f_cross", "k_pair", "method"}, {},
                "crossing points of the tunnel-split triplet, numeric and semiclassical"};
    for (const auto& c : rwa::find_crossings(scan, opts))
        cross.rows.push_back({c.f, pair_label(c.k_a, c.k_b), std::string("numeric")});
    append_wkb_crossings(cross, grid.front(), grid.back(), sc.lambda);

    std::ostringstream o;
    o << grid.size() << " points, max |log envelope error| " << fmt(worst) << '\n';
    return {{t, cross}, o.str()};
}

Result mode_monodromy(const Settings& s) {
    const LabParams lab = lab_view(s);
    const int n_max = s.nmax > 0 ? s.nmax : 120;
    if (s.steps < 1) throw ConfigError("steps must be positive");
    const auto c = floquet::compare_with_rwa(lab, n_max, s.steps);
    const auto& rep = c.report;
    Table t{"monodromy.csv",
            {"omega0", "omegaF", "gamma", "F", "n_max", "steps", "eps_k0", "eps_k1", "eps_k2", "spacing_err"},
            {{lab.omega0, lab.omegaF, lab.gamma, lab.F, static_cast<long>(n_max), static_cast<long>(s.steps),
              rep.rows[0].eps_exact, rep.rows[1].eps_exact, rep.rows[2].eps_exact, rep.spacing_err}},
            "exact Floquet quasienergies of the lowest triplet and their deviation from hbar omegaF / 3 spacing"};
    std::ostringstream o;
    o << "f = " << fmt(c.scaled.f) << ", lambda = " << fmt(c.scaled.lambda) << '\n';
    for (const auto& r : rep.rows) {
        o << "k = " << r.k << ": eps = " << fmt(r.eps_exact) << ", rwa = " << fmt(r.eps_rwa)
          << ", overlap = " << fmt(r.overlap) << (r.ambiguous ? " (ambiguous)" : "") << '\n';
    }
    o << "spacing_err = " << fmt(rep.spacing_err) << ", unitarity error = " << fmt(c.mono.unitarity_error)
      << ", step-doubling change = " << fmt(c.step_change) << '\n';
    if (rep.max_leakage > 1e-4) o << "warning: matched states reach the basis edge (weight " << fmt(rep.max_leakage) << ")\n";
    return {{t}, o.str()};
}

struct WellSetup {
    rwa::MultipletRecord rec;
    rwa::IntrawellSet wells;
    int n_max = 0;
};

WellSetup wells_for(const ScaledInput& sc, int nmax) {
    WellSetup w;
    w.n_max = nmax > 0 ? nmax : rwa::default_nmax(sc.f, sc.lambda);
    rwa::ScanOptions opts;
    opts.n_max = w.n_max;
    opts.keep_states = true;
    opts.check_truncation = false;
    w.rec = rwa::multiplet(sc.f, sc.lambda, opts);
    w.wells = rwa::intrawell_states(w.rec.states, sc.f, sc.lambda);
    return w;
}

Result mode_dissipate(const Settings& s) {
    const ScaledInput sc = scaled_view(s);
    const WellSetup ws = wells_for(sc, s.nmax);
    const fock::FockBasis basis = fock::make_basis(ws.n_max, 3);
    const double rate = sc.delta_omega / sc.lambda;
    const dissipation::LindbladGenerator gen(rwa::build_g_full(sc.f, sc.lambda, basis) * rate, sc.Gamma, sc.nbar);

    dissipation::EvolveOptions eo;
    eo.T = s.t_max > 0.0 ? s.t_max : (sc.Gamma > 0.0 ? 1.0 / sc.Gamma : 10.0 / sc.delta_omega);
    eo.dt = s.dt > 0.0 ? s.dt : 0.2 / gen.spectral_bound();
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(eo.T / eo.dt - 1e-9)));
    eo.record_every = static_cast<int>(std::max<long>(1, steps / 200));

    Table traj{"trajectory.csv", {"t", "p_well0", "p_well1", "p_well2", "coh01_abs", "purity", "trace_err"}, {},
               "well populations and interwell coherence of an initially localized state under damping"};
    dissipation::evolve(dissipation::pure_state(ws.wells.wells[0].amplitudes), gen, eo,
                        [&](double t, const ComplexMatrix& rho, double terr) {
                            const auto p = dissipation::well_populations(rho, ws.wells);
                            traj.rows.push_back({t, p[0], p[1], p[2],
                                                 std::abs(dissipation::well_coherence(rho, ws.wells, 0, 1)),
                                                 dissipation::purity(rho), terr});
                        });

    std::ostringstream o;
    o << "n_max = " << ws.n_max << ", T = " << fmt(eo.T) << '\n';
    std::vector<Table> tables{traj};
    if (sc.f >= 0.3) {
        const auto w = wkb::tunnel_quantities(sc.f, sc.lambda);
        const auto hop = dissipation::hopping_model(sc.f, sc.lambda, sc.delta_omega, sc.Gamma, sc.hbar, w, ws.rec.g);
        Table h{"hopping.csv", {"f", "lambda", "Gamma", "t_tun_abs", "t_tun_arg", "W", "Omega_max", "regime"},
                {{sc.f, sc.lambda, sc.Gamma, std::abs(hop.t_tun), std::arg(hop.t_tun),
                  hop.W ? Cell{*hop.W} : Cell{std::string("")}, hop.max_Omega(),
                  std::string(dissipation::to_string(hop.regime))}},
                ""};
        tables.push_back(h);
        o << "regime = " << dissipation::to_string(hop.regime) << ", W = " << (hop.W ? fmt(*hop.W) : "n/a")
          << ", max |Omega| = " << fmt(hop.max_Omega()) << '\n';
    }
    return {tables, o.str()};
}

Result mode_observe(const Settings& s) {
    const ScaledInput sc = scaled_view(s);
    if (s.periods < 12) throw ConfigError("observe needs periods >= 12");
    if (s.samples_per_period < 4) throw ConfigError("samples_per_period must be at least 4");
    const WellSetup ws = wells_for(sc, s.nmax);
    const double omegaF = sc.delta_omega / s.detuning;
    const double C = std::sqrt(3.0 * sc.hbar / (sc.lambda * omegaF));
    auto frame = observables::make_rotating_frame(sc.f, sc.lambda, ws.n_max, sc.delta_omega, omegaF, C);
    if (s.no_tunneling) frame = observables::without_tunneling(frame);

    const double tF = 2.0 * kPi / omegaF;
    const double dt = tF / s.samples_per_period;
    const std::size_t n = static_cast<std::size_t>(s.periods) * s.samples_per_period + 1;
    const auto series = observables::expect_q(frame, ws.wells.wells[0].amplitudes, 0.0, dt, n);
    const auto score = observables::period3_score(series, tF);

    const double rate = sc.delta_omega / sc.lambda;
    double omega_min = 0.0;
    if (!s.no_tunneling) {
        const auto& g = ws.rec.g;
        omega_min = rate * std::min({std::abs(g[1] - g[0]), std::abs(g[2] - g[0]), std::abs(g[2] - g[1])});
    }
    const auto spec = observables::spectrum(series, omega_min > 0.0 ? std::optional(omega_min) : std::nullopt);

    Table q{"expect_q.csv", {"t", "expect_q"}, {}, "lab-frame coordinate of an initially localized state"};
    for (std::size_t i = 0; i < series.size(); ++i) q.rows.push_back({series.time(i), series.values[i]});
    Table sp{"spectrum_q.csv", {"freq", "weight"}, {}, "Fourier spectrum of the coordinate, lines near omegaF/3"};
    for (std::size_t i = 0; i < spec.freq.size(); ++i) sp.rows.push_back({spec.freq[i], spec.weight[i]});

    std::ostringstream o;
    o << "score3 = " << fmt(score.score3) << ", score1 = " << fmt(score.score1) << '\n';
    for (std::size_t i = 0; i < std::min<std::size_t>(3, spec.peaks.size()); ++i)
        o << "peak " << i << ": freq = " << fmt(spec.peaks[i].freq) << ", weight = " << fmt(spec.peaks[i].weight) << '\n';
    for (const auto& w : spec.warnings) o << "warning: " << w << '\n';
    return {{q, sp}, o.str()};
}

Result dispatch(const Settings& s) {
    if (s.mode == "convert") return mode_convert(s);
    if (s.mode == "spectrum") return mode_spectrum(s);
    if (s.mode == "scan") return mode_scan(s);
    if (s.mode == "wkb") return mode_wkb(s);
    if (s.mode == "compare") return mode_compare(s);
    if (s.mode == "monodromy") return mode_monodromy(s);
    if (s.mode == "dissipate") return mode_dissipate(s);
    return mode_observe(s);
}

void write_outputs(const Settings& s, const Result& r) {
    fs::create_directories(s.out);
    const csv::Parameters params = describe(s);
    std::ofstream manifest(s.out / "manifest.txt", std::ios::trunc);
    if (!manifest) throw std::runtime_error("cannot write manifest in " + s.out.string());
    for (const auto& t : r.tables) {
        csv::Writer w(s.out / t.file, params, t.header);
        for (const auto& row : t.rows) w.row(row);
        if (!t.manifest.empty()) manifest << t.file << ": " << t.manifest << '\n';
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Period-tripling quantum oscillator: spectra, tunneling, Floquet and damped dynamics", "tripler"};
    std::string mode, config_path, out_dir;
    double f_min = 0, f_max = 0, f = 0, lambda = 0, gamma_rate = 0, nbar = 0, detuning = 0, t_max = 0, dt = 0;
    int f_points = 0, nmax = 0, steps = 0, periods = 0, spp = 0, levels = 0;
    bool no_tunneling = false;
    app.add_option("mode", mode, "Computation to run")->check(CLI::IsMember(kModes));
    app.add_option("--config", config_path, "JSON config file");
    auto* o_out = app.add_option("--out", out_dir, "Output directory");
    auto* o_fmin = app.add_option("--f-min", f_min, "Lower end of the f grid");
    auto* o_fmax = app.add_option("--f-max", f_max, "Upper end of the f grid");
    auto* o_fpts = app.add_option("--f-points", f_points, "Number of f grid points");
    auto* o_f = app.add_option("--f", f, "Scaled drive amplitude for single-point modes");
    auto* o_lambda = app.add_option("--lambda", lambda, "Dimensionless Planck constant");
    auto* o_nmax = app.add_option("--nmax", nmax, "Highest retained Fock level");
    auto* o_steps = app.add_option("--steps", steps, "Time steps per drive period (monodromy)");
    auto* o_gamma = app.add_option("--gamma-rate", gamma_rate, "Damping rate Gamma");
    auto* o_nbar = app.add_option("--nbar", nbar, "Bath Planck number");
    auto* o_det = app.add_option("--detuning", detuning, "delta_omega / omegaF for scaled input");
    auto* o_tmax = app.add_option("--t-max", t_max, "Evolution time (dissipate)");
    auto* o_dt = app.add_option("--dt", dt, "Integrator step (dissipate)");
    auto* o_per = app.add_option("--periods", periods, "Drive periods sampled (observe)");
    auto* o_spp = app.add_option("--samples-per-period", spp, "Samples per drive period (observe)");
    auto* o_lev = app.add_option("--levels", levels, "Levels per sector (spectrum)");
    auto* o_notun = app.add_flag("--no-tunneling", no_tunneling, "Remove the triplet splitting (observe)");

    std::vector<std::string> argv_store{"tripler"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Exit::ok : Exit::config_error;
    }

    Settings s;
    try {
        nlohmann::json cfg = nlohmann::json::object();
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
        s.params = parse_params(cfg);
        if (auto m = json_get<std::string>(cfg, "mode")) s.mode = *m;
        if (auto v = json_get<std::string>(cfg, "out")) s.out = *v;
        s.f_min = json_get<double>(cfg, "f_min");
        s.f_max = json_get<double>(cfg, "f_max");
        s.f_points = json_get<int>(cfg, "f_points");
        if (auto v = json_get<int>(cfg, "nmax")) s.nmax = *v;
        if (auto v = json_get<int>(cfg, "steps")) s.steps = *v;
        if (auto v = json_get<double>(cfg, "detuning")) s.detuning = *v;
        if (auto v = json_get<double>(cfg, "t_max")) s.t_max = *v;
        if (auto v = json_get<double>(cfg, "dt")) s.dt = *v;
        if (auto v = json_get<int>(cfg, "periods")) s.periods = *v;
        if (auto v = json_get<int>(cfg, "samples_per_period")) s.samples_per_period = *v;
        if (auto v = json_get<int>(cfg, "levels")) s.levels = *v;
        if (auto v = json_get<bool>(cfg, "no_tunneling")) s.no_tunneling = *v;

        if (!mode.empty()) s.mode = mode;
        if (s.mode.empty()) throw ConfigError("no mode given (one of convert, spectrum, scan, wkb, compare, "
                                              "monodromy, dissipate, observe)");
        if (std::find(kModes.begin(), kModes.end(), s.mode) == kModes.end())
            throw ConfigError("unknown mode '" + s.mode + "'");
        if (o_out->count()) s.out = out_dir;
        if (o_fmin->count()) s.f_min = f_min;
        if (o_fmax->count()) s.f_max = f_max;
        if (o_fpts->count()) s.f_points = f_points;
        if (o_nmax->count()) s.nmax = nmax;
        if (o_steps->count()) s.steps = steps;
        if (o_det->count()) s.detuning = detuning;
        if (o_tmax->count()) s.t_max = t_max;
        if (o_dt->count()) s.dt = dt;
        if (o_per->count()) s.periods = periods;
        if (o_spp->count()) s.samples_per_period = spp;
        if (o_lev->count()) s.levels = levels;
        if (o_notun->count()) s.no_tunneling = no_tunneling;

        if (o_f->count() || o_lambda->count()) {
            if (s.params && std::holds_alternative<LabParams>(*s.params))
                throw ConfigError("--f/--lambda cannot be combined with a lab-style config");
            if (!s.params) s.params = ScaledInput{};
            auto& sc = std::get<ScaledInput>(*s.params);
            if (o_f->count()) sc.f = f;
            if (o_lambda->count()) {
                if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
                sc.lambda = lambda;
            }
        }
        if (o_gamma->count() || o_nbar->count()) {
            if (!s.params) s.params = ScaledInput{};
            std::visit([&](auto& p) {
                if (o_gamma->count()) p.Gamma = gamma_rate;
                if (o_nbar->count()) p.nbar = nbar;
            }, *s.params);
        }
        if (s.params)
            if (const auto* sc = std::get_if<ScaledInput>(&*s.params)) {
                if (sc->f < 0.0) throw ConfigError("f must be non-negative");
                if (sc->Gamma < 0.0 || sc->nbar < 0.0) throw ConfigError("Gamma and nbar must be non-negative");
            }
        if (!(s.detuning > 0.0 && s.detuning < 1.0 / 3.0)) throw ConfigError("detuning must lie in (0, 1/3)");
        if (s.nmax != 0 && s.nmax < 9) throw ConfigError("nmax must be at least 9");
        const bool single = s.mode == "spectrum" || s.mode == "dissipate" || s.mode == "observe";
        if (single && !(s.params && (std::holds_alternative<LabParams>(*s.params) || o_f->count() ||
                                     cfg.contains("f"))))
            throw ConfigError("mode '" + s.mode + "' needs f (--f or config) or lab parameters");
        if (s.mode == "convert" && !s.params) throw ConfigError("convert needs parameters");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const ModelValidityError& e) {
        err << "model validity: " << e.what() << '\n';
        return Exit::validity_error;
    }

    try {
        const Result r = dispatch(s);
        write_outputs(s, r);
        out << r.summary;
        return Exit::ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const ModelValidityError& e) {
        err << "model validity: " << e.what() << '\n';
        return Exit::validity_error;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return Exit::numerical_error;
    }
}

}  // namespace tripler::cli
