#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ncgspectra/eigh.hpp"
#include "ncgspectra/matrix.hpp"

using ncg::ComplexMatrix;
using ncg::cplx;

namespace {

ComplexMatrix from_rows(std::size_t dim, std::vector<cplx> rows) {
    return ComplexMatrix(dim, std::move(rows));
}

ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = u(gen);
        for (std::size_t j = i + 1; j < dim; ++j) {
            const cplx z{u(gen), u(gen)};
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

}  // namespace

TEST_CASE("kron identity and diagonal cases") {
    const auto i2 = ComplexMatrix::identity(2);
    const auto i4 = ComplexMatrix::identity(4);
    CHECK((ncg::kron(i2, i2) - i4).max_abs() == 0.0);

    const auto d = from_rows(2, {1.0, 0.0, 0.0, -1.0});
    const auto expect = from_rows(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1});
    CHECK((ncg::kron(d, i2) - expect).max_abs() == 0.0);
}

TEST_CASE("kron block expansion") {
    const auto x = from_rows(2, {0.0, 1.0, 1.0, 0.0});
    const auto d23 = from_rows(2, {2.0, 0.0, 0.0, 3.0});
    const auto got = ncg::kron(x, d23);
    const auto expect = from_rows(4, {0, 0, 2, 0, 0, 0, 0, 3, 2, 0, 0, 0, 0, 3, 0, 0});
    CHECK((got - expect).max_abs() == 0.0);
}

TEST_CASE("kron associativity") {
    // Gaussian-integer entries keep every product and sum exact, so the
    // index-permutation identity is bitwise here.
    const auto a = from_rows(2, {cplx{1, 2}, cplx{0, -1}, cplx{3, 0}, cplx{-2, 1}});
    const auto b = from_rows(2, {cplx{0, 1}, cplx{2, -3}, cplx{1, 1}, cplx{-1, 0}});
    const auto c = from_rows(2, {cplx{2, 0}, cplx{0, -2}, cplx{1, -1}, cplx{0, 3}});
    CHECK((ncg::kron(ncg::kron(a, b), c) - ncg::kron(a, ncg::kron(b, c))).max_abs() == 0.0);

    std::mt19937_64 gen(7);
    const auto x = random_hermitian(2, gen);
    const auto y = random_hermitian(3, gen);
    const auto z = random_hermitian(2, gen);
    const auto lhs = ncg::kron(ncg::kron(x, y), z);
    const auto rhs = ncg::kron(x, ncg::kron(y, z));
    CHECK((lhs - rhs).max_abs() <= 1e-14);
}

TEST_CASE("commutator basics") {
    std::mt19937_64 gen(11);
    const auto m = random_hermitian(4, gen);
    CHECK(ncg::commutator(ComplexMatrix::identity(4), m).max_abs() == 0.0);
    CHECK(ncg::commutator(m, m).max_abs() == 0.0);

    const auto sz = from_rows(2, {1.0, 0.0, 0.0, -1.0});
    const auto sx = from_rows(2, {0.0, 1.0, 1.0, 0.0});
    const auto expect = from_rows(2, {0.0, 2.0, -2.0, 0.0});
    CHECK((ncg::commutator(sz, sx) - expect).max_abs() == 0.0);

    CHECK_THROWS(ncg::commutator(ComplexMatrix::identity(2), ComplexMatrix::identity(3)));
}

TEST_CASE("eigh on small fixed matrices") {
    const auto e1 = ncg::eigh(ComplexMatrix::identity(3));
    REQUIRE(e1.eigenvalues.size() == 3);
    for (double v : e1.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    const auto e2 = ncg::eigh(from_rows(2, {1.0, 0.0, 0.0, -1.0}));
    CHECK(e2.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e2.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto e3 = ncg::eigh(from_rows(2, {0.0, 1.0, 1.0, 0.0}));
    CHECK(e3.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e3.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigh rejects non-Hermitian input") {
    auto m = from_rows(2, {0.0, 1.0, 0.0, 0.0});
    CHECK_THROWS(ncg::eigh(m));
}

TEST_CASE("eigh reconstruction and residuals on random Hermitian matrices") {
    std::mt19937_64 gen(3);
    for (std::size_t dim : {2, 5, 16, 33, 64}) {
        const auto h = random_hermitian(dim, gen);
        const auto e = ncg::eigh(h);
        const double hnorm = ncg::operator_norm(h);

        for (std::size_t j = 1; j < dim; ++j) CHECK(e.eigenvalues[j - 1] <= e.eigenvalues[j]);

        ComplexMatrix recon(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < dim; ++k)
                    s += e.eigenvectors(i, k) * e.eigenvalues[k] * std::conj(e.eigenvectors(j, k));
                recon(i, j) = s;
            }
        CHECK(ncg::operator_norm(recon - h) <= 1e-10 * hnorm);

        for (std::size_t j = 0; j < dim; ++j) {
            auto v = e.eigenvector(j);
            auto mv = ncg::matvec(h, v);
            for (std::size_t i = 0; i < dim; ++i) mv[i] -= e.eigenvalues[j] * v[i];
            CHECK(ncg::vec_norm(mv) <= ncg::kEigResidualTol * hnorm);
        }

        const auto gram = e.eigenvectors.dagger() * e.eigenvectors;
        CHECK((gram - ComplexMatrix::identity(dim)).max_abs() <= ncg::kEigResidualTol);
    }
}

TEST_CASE("eigh on a highly degenerate projector spectrum") {
    // rank-8 projector of dim 96: long runs of (near-)zero diagonals in the
    // tridiagonal must still deflate
    std::mt19937_64 gen(17);
    const std::size_t dim = 96, rank = 8;
    const auto basis = ncg::eigh(random_hermitian(dim, gen));
    ComplexMatrix p(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < rank; ++k)
                s += basis.eigenvectors(i, k) * std::conj(basis.eigenvectors(j, k));
            p(i, j) = s;
        }
    const auto ev = ncg::eigh_values(p);
    REQUIRE(ev.size() == dim);
    for (std::size_t j = 0; j < dim - rank; ++j) CHECK(std::abs(ev[j]) <= 1e-12);
    for (std::size_t j = dim - rank; j < dim; ++j)
        CHECK(ev[j] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("operator norm basics") {
    CHECK(ncg::operator_norm(ComplexMatrix::zero(3)) == 0.0);
    CHECK(ncg::operator_norm(from_rows(2, {3.0, 0.0, 0.0, -5.0})) ==
          doctest::Approx(5.0).epsilon(1e-12));
    CHECK(ncg::operator_norm(from_rows(2, {0.0, 2.0, 0.0, 0.0})) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("operator norm of produced unitaries is 1") {
    std::mt19937_64 gen(21);
    for (std::size_t dim : {2, 4, 9}) {
        const auto h = random_hermitian(dim, gen);
        const auto e = ncg::eigh(h);
        CHECK(std::abs(ncg::operator_norm(e.eigenvectors) - 1.0) <= 1e-12);
    }
}

TEST_CASE("gram independence: orthonormal pair and duplicates") {
    std::vector<cplx> e1{1.0, 0.0}, e2{0.0, 1.0};
    CHECK(ncg::gram_independent({e1, e2}, 1.0));
    CHECK_FALSE(ncg::gram_independent({e1, e1}, 1.0));
    CHECK_THROWS(ncg::gram_independent({}, 1.0));
}

TEST_CASE("gram independence: three unit vectors at pairwise overlap 0.3") {
    // Gram matrix 0.7 I + 0.3 J has eigenvalues {1.6, 0.7, 0.7}; the strict
    // bound 0.3 < 1/3 holds, so the verdict is true and rank must be 3.
    const double c = 0.3;
    const double s = std::sqrt(1.0 - c * c);
    std::vector<cplx> v1{1.0, 0.0, 0.0};
    std::vector<cplx> v2{c, s, 0.0};
    const double y = (c - c * c) / s;
    std::vector<cplx> v3{c, y, std::sqrt(1.0 - c * c - y * y)};
    // pad the norms one step above 1 so rounding cannot drop ||v||^2 below
    // the alpha = 1 diagonal bound; the overlaps stay well under 1/3
    for (auto* v : {&v1, &v2, &v3})
        for (auto& z : *v) z *= 1.0 + 1e-12;
    CHECK(std::abs(ncg::vec_dot(v1, v2) - cplx(c)) < 1e-11);
    CHECK(std::abs(ncg::vec_dot(v1, v3) - cplx(c)) < 1e-11);
    CHECK(std::abs(ncg::vec_dot(v2, v3) - cplx(c)) < 1e-11);
    CHECK(ncg::gram_independent({v1, v2, v3}, 1.0));
}

TEST_CASE("gram verdict implies full numerical rank") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 6, d = 3;
        std::vector<std::vector<cplx>> vs;
        const auto e = ncg::eigh(random_hermitian(dim, gen));
        for (std::size_t j = 0; j < d; ++j) vs.push_back(e.eigenvector(j));
        // orthonormal to eigensolver precision; alpha sits just under 1 so
        // norm rounding cannot fail the diagonal bound, and the rank
        // cross-check inside gram_independent must not throw
        CHECK(ncg::gram_independent(vs, 1.0 - 1e-9));
    }
}

TEST_CASE("hermitian predicate tolerance") {
    auto m = ComplexMatrix::identity(3);
    CHECK(ncg::hermitian(m));
    m(0, 1) = cplx{0.0, 1e-12};
    CHECK(ncg::hermitian(m));  // within 1e-10 * (1 + max abs)
    m(0, 1) = cplx{0.0, 1e-3};
    CHECK_FALSE(ncg::hermitian(m));
}
