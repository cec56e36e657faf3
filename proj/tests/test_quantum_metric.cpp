#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ncgspectra/fuzzy_torus.hpp"
#include "ncgspectra/matrix.hpp"
#include "ncgspectra/quantum_metric.hpp"

using ncg::ComplexMatrix;
using ncg::cplx;
using ncg::DensityState;
using std::numbers::pi;

namespace {

ComplexMatrix random_traceless_hermitian(std::size_t n, std::mt19937_64& gen) {
    const auto u = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0; };
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = u();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx z{u(), u()};
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    const cplx tr = m.trace() * (1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= tr;
    return m;
}

DensityState mixed_a() {
    ComplexMatrix m(2);
    m(0, 0) = 0.7;
    m(0, 1) = cplx{0.2, -0.1};
    m(1, 0) = cplx{0.2, 0.1};
    m(1, 1) = 0.3;
    return DensityState(m);
}

DensityState mixed_b() {
    ComplexMatrix m(2);
    m(0, 0) = 0.4;
    m(0, 1) = cplx{0.0, -0.1};
    m(1, 0) = cplx{0.0, 0.1};
    m(1, 1) = 0.6;
    return DensityState(m);
}

}  // namespace

TEST_CASE("density state validation") {
    CHECK_NOTHROW(DensityState::vector_state(3, 0));
    CHECK_NOTHROW(DensityState::maximally_mixed(4));
    CHECK_THROWS(DensityState::vector_state(3, 5));

    ComplexMatrix bad(2);
    bad(0, 0) = 2.0;  // trace 2
    CHECK_THROWS(DensityState(bad));

    ComplexMatrix neg(2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;  // negative eigenvalue
    CHECK_THROWS(DensityState(neg));

    ComplexMatrix nonh(2);
    nonh(0, 0) = 0.5;
    nonh(1, 1) = 0.5;
    nonh(0, 1) = 0.3;  // not Hermitian without the conjugate entry
    CHECK_THROWS(DensityState(nonh));
}

TEST_CASE("lip seminorm basics") {
    const auto t = ncg::dirac_fuzzy(2);
    CHECK(ncg::lip_seminorm(t, ComplexMatrix::identity(2)) <= 1e-12);

    ComplexMatrix a(2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;  // Re U_2
    const double base = ncg::lip_seminorm(t, a);
    CHECK(base == doctest::Approx(2.0 / pi).epsilon(1e-10));

    ComplexMatrix scaled = a;
    scaled *= 3.5;
    CHECK(ncg::lip_seminorm(t, scaled) == doctest::Approx(3.5 * base).epsilon(1e-10));

    ComplexMatrix nonh(2);
    nonh(0, 1) = 1.0;
    CHECK_THROWS(ncg::lip_seminorm(t, nonh));
}

TEST_CASE("lip is a seminorm") {
    std::mt19937_64 gen(3);
    const auto t = ncg::dirac_fuzzy(3);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_traceless_hermitian(3, gen);
        const auto b = random_traceless_hermitian(3, gen);
        const double la = ncg::lip_seminorm(t, a);
        const double lb = ncg::lip_seminorm(t, b);
        CHECK(ncg::lip_seminorm(t, a + b) <= la + lb + 1e-10);

        ComplexMatrix ca = a;
        ca *= -1.7;
        CHECK(std::abs(ncg::lip_seminorm(t, ca) - 1.7 * la) <= 1e-12 * (1.0 + la));
    }
}

TEST_CASE("mk distance vanishes on identical states") {
    const auto t = ncg::dirac_fuzzy(2);
    const auto e0 = DensityState::vector_state(2, 0);
    const auto r = ncg::mk_distance(t, e0, e0);
    CHECK(r.lower_bound == 0.0);
    CHECK(r.estimate == 0.0);
    CHECK(r.converged);
    CHECK_FALSE(r.unbounded_direction_detected);
}

TEST_CASE("mk distance between basis vector states at n = 2") {
    const auto t = ncg::dirac_fuzzy(2);
    const auto e0 = DensityState::vector_state(2, 0);
    const auto e1 = DensityState::vector_state(2, 1);

    const auto r = ncg::mk_distance(t, e0, e1);
    const double oracle = ncg::mk_bruteforce_oracle(t, e0, e1, 2000);
    CHECK(std::abs(r.lower_bound - oracle) <= 0.02 * oracle);

    const auto swapped = ncg::mk_distance(t, e1, e0);
    CHECK(std::abs(r.lower_bound - swapped.lower_bound) <= 1e-9);
    CHECK(std::abs(r.estimate - swapped.estimate) <= 1e-9);

    // the exact distance for this pair
    CHECK(std::abs(r.lower_bound - pi) <= 0.02 * pi);
    CHECK_FALSE(r.unbounded_direction_detected);
}

TEST_CASE("mk witness feasibility") {
    const auto t = ncg::dirac_fuzzy(2);
    const auto pairs = {std::pair{DensityState::vector_state(2, 0), mixed_a()},
                        std::pair{mixed_a(), mixed_b()},
                        std::pair{DensityState::vector_state(2, 1), mixed_b()}};
    for (const auto& [phi, psi] : pairs) {
        const auto r = ncg::mk_distance(t, phi, psi);
        CHECK_FALSE(r.unbounded_direction_detected);
        CHECK(r.lower_bound > 0.0);
        CHECK(r.lower_bound <= r.estimate + 1e-12);
        CHECK(ncg::lip_seminorm(t, r.witness) <= 1.0 + 1e-9);
        CHECK(std::abs(r.witness.trace()) <= 1e-12);
        // the witness value reproduces the certified bound
        ComplexMatrix drho = phi.rho - psi.rho;
        cplx val{};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k) val += drho(i, k) * r.witness(k, i);
        CHECK(std::abs(std::abs(val.real()) - r.lower_bound) <= 1e-9);
    }
}

TEST_CASE("mk scale covariance") {
    const auto t = ncg::dirac_fuzzy(2);
    const auto t2 = ncg::scaled_triple(t, 2.0);
    const auto e0 = DensityState::vector_state(2, 0);
    const auto e1 = DensityState::vector_state(2, 1);
    const double base = ncg::mk_distance(t, e0, e1).estimate;
    const double scaled = ncg::mk_distance(t2, e0, e1).estimate;
    CHECK(std::abs(scaled - base / 2.0) <= 0.02 * (base / 2.0));
}

TEST_CASE("mk triangle inequality within solver slack") {
    const auto t = ncg::dirac_fuzzy(2);
    const auto a = DensityState::vector_state(2, 0);
    const auto b = mixed_a();
    const auto c = DensityState::vector_state(2, 1);
    const double dab = ncg::mk_distance(t, a, b).estimate;
    const double dbc = ncg::mk_distance(t, b, c).estimate;
    const double dac = ncg::mk_distance(t, a, c).estimate;
    const double slack = 3.0 * 0.02 * std::max({dab, dbc, dac});
    CHECK(dac <= dab + dbc + slack);
    CHECK(dab <= dac + dbc + slack);
    CHECK(dbc <= dab + dac + slack);
}

TEST_CASE("mk oracle behavior") {
    const auto t = ncg::dirac_fuzzy(2);
    const auto e0 = DensityState::vector_state(2, 0);
    const auto e1 = DensityState::vector_state(2, 1);

    CHECK(ncg::mk_bruteforce_oracle(t, e0, e0, 100) == 0.0);

    const double d1 = ncg::mk_bruteforce_oracle(t, e0, e1, 1000);
    const double d2 = ncg::mk_bruteforce_oracle(t, e0, e1, 2000);
    CHECK(d2 >= d1 - 1e-9);

    // a lower bound of the true sup; for this pair the sup is pi
    CHECK(d2 <= pi + 1e-6);
    CHECK(d2 >= 0.98 * pi);

    const auto t4 = ncg::dirac_fuzzy(4);
    CHECK_THROWS(ncg::mk_bruteforce_oracle(t4, DensityState::vector_state(4, 0),
                                           DensityState::vector_state(4, 1), 100));
}

TEST_CASE("mk mixed-state fixture at n = 2") {
    const auto t = ncg::dirac_fuzzy(2);
    const auto r = ncg::mk_distance(t, mixed_a(), mixed_b());
    const double oracle = ncg::mk_bruteforce_oracle(t, mixed_a(), mixed_b(), 2000);
    CHECK(std::abs(r.lower_bound - oracle) <= 0.02 * oracle);
    // regression value from the oracle at samples 2000, seed 1
    CHECK(oracle == doctest::Approx(1.1318006168889589).epsilon(1e-12));
}

TEST_CASE("mk distance at n = 3 cross-checks the oracle") {
    const auto t = ncg::dirac_fuzzy(3);
    const auto e0 = DensityState::vector_state(3, 0);
    const auto e1 = DensityState::vector_state(3, 1);
    const auto r = ncg::mk_distance(t, e0, e1);
    const double oracle = ncg::mk_bruteforce_oracle(t, e0, e1, 2000);
    CHECK(r.lower_bound >= oracle * 0.98 - 1e-9);
    CHECK(ncg::lip_seminorm(t, r.witness) <= 1.0 + 1e-9);
}
