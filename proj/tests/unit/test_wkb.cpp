#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tripler/params.hpp"
#include "tripler/wkb.hpp"

using namespace tripler;
using cd = std::complex<double>;

TEST_CASE("geometry at f = 1") {
    const auto g = wkb::geometry(1.0, 0.3);
    CHECK(g.Q0 == doctest::Approx(1.6180340).epsilon(1e-7));
    CHECK(g.g_min == doctest::Approx(-0.757514).epsilon(1e-6));
    CHECK(g.omega_min == doctest::Approx(4.190741).epsilon(1e-6));
    CHECK(g.Q_B == doctest::Approx(0.868034).epsilon(1e-6));
    CHECK(g.Q1 == doctest::Approx(-0.5 * g.Q0));
    CHECK(g.P1 == doctest::Approx(std::sqrt(3.0) / 2.0 * g.Q0));
    CHECK(g.P2 == doctest::Approx(-g.P1));
    CHECK(g.g0 == doctest::Approx(g.g_min + 0.15 * g.omega_min));
    CHECK(wkb::g_on_axis(g.Q0, 1.0) == doctest::Approx(g.g_min).epsilon(1e-14));
    CHECK_THROWS_AS(wkb::geometry(0.0, 0.3), ModelValidityError);
    CHECK_THROWS_AS(wkb::geometry(-1.0, 0.3), ModelValidityError);
    CHECK(wkb::well_radius(0.0) == 1.0);
}

TEST_CASE("A and B at the neighbouring well") {
    for (double f : {0.2, 0.7, 1.0, 1.9, 3.0}) {
        const double lambda = 0.3;
        const auto g = wkb::geometry(f, lambda);
        CHECK(wkb::A_coefficient(g.Q1, f) == doctest::Approx(g.P1 * g.P1).epsilon(1e-12));
        CHECK(wkb::B_coefficient(g.Q1, f, g.g0) == doctest::Approx(2.0 * lambda * g.omega_min).epsilon(1e-10));
    }
    CHECK(wkb::B_coefficient(wkb::geometry(1.0, 0.3).Q1, 1.0, wkb::geometry(1.0, 0.3).g0) ==
          doctest::Approx(2.514445).epsilon(1e-6));
}

TEST_CASE("factored classical B matches the direct form") {
    for (double f : {0.5, 1.0, 2.5}) {
        const auto g = wkb::geometry(f, 0.3);
        for (int i = 0; i < 20; ++i) {
            const double Q = g.Q1 + (g.Q0 - g.Q1) * (i + 0.5) / 20.0;
            const double direct = wkb::B_coefficient(Q, f, g.g_min);
            CHECK(wkb::B_classical(Q, g) == doctest::Approx(direct).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("classical momentum branch") {
    const double f = 1.0;
    const auto g = wkb::geometry(f, 0.3);
    // purely imaginary between Q_B and Q0, vanishing at Q0
    const auto near_top = wkb::classical_momentum(g.Q0 - 1e-9, g);
    CHECK(std::abs(near_top.P) < 1e-3);
    for (double Q : {1.0, 1.2, 1.5}) {
        const auto b = wkb::classical_momentum(Q, g);
        CHECK(std::abs(b.P.real()) < 1e-12);
        CHECK(b.P.imag() < 0.0);
    }
    // genuinely complex between Q1 and Q_B, ending on the well at (Q1, -P1)
    const auto at_q1 = wkb::classical_momentum(g.Q1 + 1e-9, g);
    CHECK(std::abs(at_q1.P + g.P1) < 1e-3);
    // continuous through Q_B
    const auto lo = wkb::classical_momentum(g.Q_B - 1e-7, g);
    const auto hi = wkb::classical_momentum(g.Q_B + 1e-7, g);
    CHECK(std::abs(lo.P - hi.P) < 1e-3);
    // lies on the level set
    for (double Q : {-0.5, 0.3, 1.3}) {
        const cd P = wkb::classical_momentum(Q, g).P;
        const cd M = Q * Q + P * P - 1.0;
        const cd gv = 0.25 * M * M - (f / 3.0) * (Q * Q * Q - 3.0 * P * P * Q);
        CHECK(std::abs(gv - g.g_min) < 1e-9);
    }
    CHECK_THROWS_AS(wkb::momentum_branch(g.Q0 + 0.1, f, 0.3, g.g0), std::out_of_range);
}

TEST_CASE("tunnel prefactor and splittings at f = 1") {
    const auto w = wkb::tunnel_quantities(1.0, 0.3);
    CHECK(w.C_tun == doctest::Approx(-2.846).epsilon(1e-3));
    CHECK(w.S_tun > 0.0);
    double sum = 0.0;
    for (double s : w.splittings) sum += s;
    CHECK(std::abs(sum) < 1e-14 * w.envelope() + 1e-300);
    for (int k = 0; k < 3; ++k) CHECK(w.splittings[k] == wkb::splitting(w, k));
    CHECK(std::abs(w.splittings[0]) <= w.envelope());
    const double phase = w.phase_mod_pi();
    CHECK((phase >= 0.0 && phase < std::numbers::pi));
}

TEST_CASE("crossing lattice index fixes the degenerate pair") {
    CHECK(wkb::crossing_pair(1) == std::array<int, 2>{0, 1});
    CHECK(wkb::crossing_pair(2) == std::array<int, 2>{0, 2});
    CHECK(wkb::crossing_pair(3) == std::array<int, 2>{1, 2});
    CHECK(wkb::crossing_pair(4) == std::array<int, 2>{0, 1});
    // at a crossing of (a, b) the two splittings agree
    for (const auto& c : wkb::crossing_locations(0.8, 2.5, 0.3)) {
        const auto w = wkb::tunnel_quantities(c.f, 0.3);
        CHECK(std::abs(w.splittings[c.k_a] - w.splittings[c.k_b]) < 1e-6 * w.envelope());
    }
}

TEST_CASE("action grows with drive and the correction stays small") {
    double last = 0.0;
    for (double f = 0.5; f <= 3.0; f += 0.25) {
        const auto w = wkb::tunnel_quantities(f, 0.3);
        CHECK(w.S_classical > last);
        last = w.S_classical;
    }
    const auto a = wkb::tunnel_quantities(1.2, 0.2);
    const auto b = wkb::tunnel_quantities(1.2, 0.05);
    CHECK(std::abs(b.S_tun - b.S_classical) < std::abs(a.S_tun - a.S_classical));
    CHECK(std::abs(b.S_tun - b.S_classical) < 0.1 * b.S_classical);
}

TEST_CASE("predicted crossings alternate through the three pairs") {
    const auto cs = wkb::crossing_locations(0.8, 2.5, 0.3);
    REQUIRE(cs.size() >= 3);
    for (std::size_t i = 1; i < cs.size(); ++i) {
        CHECK(cs[i].f > cs[i - 1].f);
        CHECK(std::abs(cs[i].lattice_index - cs[i - 1].lattice_index) == 1);
    }
    CHECK(cs[0].f == doctest::Approx(0.94868).epsilon(1e-4));
}
