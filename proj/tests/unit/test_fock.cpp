#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "tripler/fock.hpp"

using namespace tripler;
using cd = std::complex<double>;

TEST_CASE("basis construction limits") {
    CHECK_THROWS(fock::make_basis(20, 1));
    CHECK_THROWS(fock::make_basis(8, 3));
    CHECK(fock::make_basis(9, 3).dim() == 10);
}

TEST_CASE("a^3 + a^dagger^3 elements") {
    const auto basis = fock::make_basis(30, 3);
    const ComplexMatrix m = fock::ladder_cubed_elements(basis);
    CHECK(m(3, 0).real() == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
    CHECK(m(0, 3).real() == doctest::Approx(2.449490).epsilon(1e-6));
    for (int i = 0; i < basis.dim(); ++i)
        for (int j = 0; j < basis.dim(); ++j)
            if (std::abs(i - j) != 3) CHECK(m(i, j) == cd(0.0, 0.0));
    CHECK(fock::hermiticity_error(m) == 0.0);
}

TEST_CASE("a^3 + a^dagger^3 agrees with powers of the ladder matrix") {
    const int d = 25;
    const auto basis = fock::make_basis(d - 1, 3);
    const ComplexMatrix a = fock::annihilation(d);
    const ComplexMatrix a3 = a * a * a;
    const ComplexMatrix expected = a3 + a3.adjoint();
    CHECK((fock::ladder_cubed_elements(basis) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("number operator") {
    const auto basis = fock::make_basis(12, 3);
    const ComplexMatrix n = fock::number_operator(basis);
    CHECK(n(0, 0) == cd(0.0, 0.0));
    CHECK(n(5, 5) == cd(5.0, 0.0));
    ComplexMatrix off = n;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
    const ComplexMatrix a = fock::annihilation(basis.dim());
    CHECK((a.adjoint() * a - n).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("rotation phases") {
    const double pi = std::numbers::pi;
    CHECK(std::abs(fock::rotation_phase(4, 3) - std::polar(1.0, -2.0 * pi / 3.0)) < 1e-15);
    CHECK(fock::rotation_phase(6, 3) == cd(1.0, 0.0));
    CHECK(std::abs(fock::rotation_phase(1, 2) - cd(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("sector split is a partition") {
    const auto basis = fock::make_basis(9, 3);
    const auto sectors = fock::sector_split(basis);
    REQUIRE(sectors.size() == 3);
    CHECK(sectors[0].indices == std::vector<int>{0, 3, 6, 9});
    CHECK(sectors[1].indices == std::vector<int>{1, 4, 7});
    CHECK(sectors[1].dim() == 3);
    for (int K : {2, 3, 4, 5}) {
        const auto b = fock::make_basis(23, K);
        std::set<int> seen;
        std::size_t total = 0;
        for (const auto& s : fock::sector_split(b)) {
            total += s.indices.size();
            for (int n : s.indices) {
                CHECK(n % K == s.k);
                seen.insert(n);
            }
        }
        CHECK(total == seen.size());
        CHECK(static_cast<int>(seen.size()) == b.dim());
    }
}

TEST_CASE("rotation commutes with n and a^3 + a^dagger^3") {
    const auto basis = fock::make_basis(40, 3);
    const ComplexMatrix N = fock::rotation_operator(basis);
    const ComplexMatrix g = 0.7 * fock::number_operator(basis) - 0.3 * fock::ladder_cubed_elements(basis) +
                            0.1 * fock::number_operator(basis) * fock::number_operator(basis);
    const ComplexMatrix comm = N * g - g * N;
    const int interior = basis.n_max - 3 + 1;
    CHECK(comm.topLeftCorner(interior, interior).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a^3 + a^dagger^3 preserves sectors") {
    const auto basis = fock::make_basis(30, 3);
    const ComplexMatrix m = fock::ladder_cubed_elements(basis);
    for (int k = 0; k < 3; ++k)
        for (int kk = 0; kk < 3; ++kk) {
            if (k == kk) continue;
            const ComplexMatrix block = fock::sector_projector(basis, k) * m * fock::sector_projector(basis, kk);
            CHECK(block.cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("restrict and embed are inverse on a sector") {
    const auto basis = fock::make_basis(15, 3);
    const auto sectors = fock::sector_split(basis);
    const ComplexMatrix m = fock::ladder_cubed_elements(basis);
    const ComplexMatrix r = fock::restrict_to(m, sectors[2]);
    CHECK(r.rows() == sectors[2].dim());
    CHECK(r(0, 1) == m(2, 5));
    ComplexVector v(sectors[2].dim());
    for (int i = 0; i < v.size(); ++i) v(i) = cd(i + 1.0, -i);
    const ComplexVector full = fock::embed(v, sectors[2], basis.dim());
    CHECK(full(2) == v(0));
    CHECK(full(5) == v(1));
    CHECK(full(0) == cd(0.0, 0.0));
}

TEST_CASE("coherent state") {
    const cd alpha(1.2, -0.4);
    const int d = 60;
    const ComplexVector c = fock::coherent_state(alpha, d);
    CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const ComplexMatrix a = fock::annihilation(d);
    CHECK(std::abs(c.dot(a * c) - alpha) < 1e-12);
}
