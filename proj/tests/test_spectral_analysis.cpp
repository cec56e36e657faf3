#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "ncgspectra/eigh.hpp"
#include "ncgspectra/fuzzy_torus.hpp"
#include "ncgspectra/spectral_analysis.hpp"

using ncg::IndexedSpectrum;

TEST_CASE("cluster merge rule") {
    auto s = ncg::cluster_multiplicities({1.0, 1.0, 1.0}, 1e-8);
    REQUIRE(s.clusters.size() == 1);
    CHECK(s.clusters[0].value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.clusters[0].multiplicity == 3);

    s = ncg::cluster_multiplicities({-1.0, 1.0}, 0.5);
    REQUIRE(s.clusters.size() == 2);
    CHECK(s.clusters[0].value == -1.0);
    CHECK(s.clusters[1].value == 1.0);
    CHECK(s.clusters[0].multiplicity == 1);

    s = ncg::cluster_multiplicities({0.0, 1e-10, 2.0}, 1e-8);
    REQUIRE(s.clusters.size() == 2);
    CHECK(std::abs(s.clusters[0].value) <= 1e-10);
    CHECK(s.clusters[0].multiplicity == 2);
    CHECK(s.clusters[1].value == 2.0);
    CHECK(s.clusters[1].multiplicity == 1);

    CHECK_THROWS(ncg::cluster_multiplicities({}, 1e-8));
}

TEST_CASE("cluster flattening reproduces the input within tol") {
    std::mt19937_64 gen(17);
    const auto urand = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const double tol = 1e-3;
    for (int trial = 0; trial < 30; ++trial) {
        // centers separated by at least 4 tol, members jittered within tol/4
        std::vector<double> ev;
        double center = -3.0;
        for (int c = 0; c < 8; ++c) {
            center += 4.0 * tol + urand();
            const int members = 1 + static_cast<int>(urand() * 4.0);
            for (int m = 0; m < members; ++m) ev.push_back(center + (urand() - 0.5) * tol / 2.0);
        }
        std::sort(ev.begin(), ev.end());
        const auto s = ncg::cluster_multiplicities(ev, tol);
        std::vector<double> flat;
        for (const auto& c : s.clusters)
            for (std::size_t r = 0; r < c.multiplicity; ++r) flat.push_back(c.value);
        REQUIRE(flat.size() == ev.size());
        for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(flat[i] - ev[i]) <= tol);
        for (std::size_t i = 1; i < s.clusters.size(); ++i)
            CHECK(s.clusters[i].value > s.clusters[i - 1].value);
    }
}

TEST_CASE("index assignment puts 0 at the smallest nonnegative value") {
    auto s = ncg::cluster_multiplicities({-2.0, 0.0, 3.0}, 1e-8);
    s = ncg::index_spectrum(std::move(s));
    REQUIRE(s.index_offset.has_value());
    CHECK(s.min_index() == -1);
    CHECK(s.max_index() == 1);
    CHECK(s.at_index(0).value == 0.0);
    CHECK(s.at_index(-1).value == -2.0);
    CHECK(s.at_index(1).value == 3.0);

    auto single = ncg::index_spectrum(ncg::cluster_multiplicities({5.0}, 1e-8));
    CHECK(single.min_index() == 0);
    CHECK(single.max_index() == 0);

    CHECK_THROWS_WITH_AS(
        (void)ncg::index_spectrum(ncg::cluster_multiplicities({-1.0, -0.5}, 1e-8)),
        doctest::Contains("negat"), std::invalid_argument);
}

TEST_CASE("index assignment is idempotent") {
    auto s = ncg::index_spectrum(ncg::cluster_multiplicities({-2.0, 0.5, 3.0}, 1e-8));
    auto t = ncg::index_spectrum(s);
    CHECK(s.index_offset == t.index_offset);
    CHECK(s.clusters == t.clusters);
}

TEST_CASE("hausdorff distance basics") {
    CHECK(ncg::hausdorff_distance({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK(ncg::hausdorff_distance({0.0}, {1.0}) == 1.0);
    CHECK(ncg::hausdorff_distance({0.0, 2.0}, {1.0}) == 1.0);
    CHECK_THROWS(ncg::hausdorff_distance({}, {1.0}));
    CHECK_THROWS(ncg::hausdorff_distance({1.0}, {}));
}

TEST_CASE("hausdorff distance is a metric on random finite sets") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_int_distribution<int> len(1, 8);
    const auto rand_set = [&] {
        std::vector<double> v(static_cast<std::size_t>(len(gen)));
        for (auto& x : v) x = u(gen);
        return v;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = rand_set(), b = rand_set(), c = rand_set();
        const double dab = ncg::hausdorff_distance(a, b);
        const double dba = ncg::hausdorff_distance(b, a);
        const double dac = ncg::hausdorff_distance(a, c);
        const double dbc = ncg::hausdorff_distance(b, c);
        CHECK(ncg::hausdorff_distance(a, a) == 0.0);
        CHECK(dab == dba);
        CHECK(dac <= dab + dbc + 1e-12);
        CHECK(dab >= 0.0);
    }
}

TEST_CASE("windowed spectrum") {
    auto s = ncg::cluster_multiplicities({-3.0, 0.0, 3.0}, 1e-8);
    CHECK(ncg::windowed_spectrum(s, 1.0) == std::vector<double>{0.0});
    CHECK(ncg::windowed_spectrum(s, 10.0) == std::vector<double>{-3.0, 0.0, 3.0});

    auto t = ncg::cluster_multiplicities({-2.0, -1.0, 1.0, 2.0}, 1e-8);
    CHECK(ncg::windowed_spectrum(t, 1.5) == std::vector<double>{-1.0, 1.0});
}

TEST_CASE("tracking identical spectra gives zero deviations") {
    auto s = ncg::index_spectrum(ncg::cluster_multiplicities({-1.0, 0.0, 2.0}, 1e-8));
    const auto rep = ncg::track_sequence({s, s, s});
    REQUIRE(!rep.tracks.empty());
    for (const auto& tr : rep.tracks) {
        CHECK(tr.present_in_all);
        for (double d : tr.deviations) CHECK(d == 0.0);
    }
    CHECK(rep.warnings.empty());
    CHECK_FALSE(rep.index_shift_suggested);
}

TEST_CASE("tracking a synthetic 1 + 1/n sequence converges") {
    std::vector<IndexedSpectrum> seq;
    for (int n = 2; n <= 10; ++n) {
        const double v = 1.0 + 1.0 / static_cast<double>(n);
        seq.push_back(ncg::index_spectrum(ncg::cluster_multiplicities({v}, 1e-10)));
    }
    const auto rep = ncg::track_sequence(seq);
    REQUIRE(rep.tracks.size() == 1);
    const auto& tr = rep.tracks[0];
    CHECK(tr.index == 0);
    CHECK(tr.limit_candidate == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(tr.deviations_decreasing);
    for (std::size_t i = 1; i + 1 < tr.deviations.size(); ++i)
        CHECK(tr.deviations[i] < tr.deviations[i - 1]);
}

TEST_CASE("tracking inconsistent ranges reports warnings, not truncation") {
    auto wide = ncg::index_spectrum(ncg::cluster_multiplicities({-2.0, 0.0, 2.0, 4.0}, 1e-8));
    auto narrow = ncg::index_spectrum(ncg::cluster_multiplicities({0.1, 2.1}, 1e-8));
    const auto rep = ncg::track_sequence({wide, narrow});
    CHECK(!rep.warnings.empty());
    bool found_partial = false;
    for (const auto& tr : rep.tracks)
        if (!tr.present_in_all) found_partial = true;
    CHECK(found_partial);
}

TEST_CASE("tracking requires at least two spectra and assigned offsets") {
    auto s = ncg::index_spectrum(ncg::cluster_multiplicities({0.0}, 1e-8));
    CHECK_THROWS(ncg::track_sequence({s}));
    IndexedSpectrum no_offset = ncg::cluster_multiplicities({0.0, 1.0}, 1e-8);
    CHECK_THROWS(ncg::track_sequence({s, no_offset}));
}

TEST_CASE("gap floors are checked per index") {
    auto a = ncg::index_spectrum(ncg::cluster_multiplicities({0.0, 1.0}, 1e-8));
    auto b = ncg::index_spectrum(ncg::cluster_multiplicities({0.0, 0.9}, 1e-8));
    std::map<int, double> floor{{0, 0.5}};
    const auto rep = ncg::track_sequence({a, b}, floor);
    REQUIRE(rep.gap_floor_indices.size() == 1);
    CHECK(rep.gap_floor_indices[0] == 0);
    CHECK(rep.gap_floor_held[0]);

    std::map<int, double> tight{{0, 0.95}};
    const auto rep2 = ncg::track_sequence({a, b}, tight);
    CHECK_FALSE(rep2.gap_floor_held[0]);
}

TEST_CASE("multiplicity convergence verdicts") {
    using V = ncg::MultiplicityVerdict;
    const auto limit = ncg::index_spectrum(ncg::cluster_multiplicities(
        {0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0}, 1e-8));
    // limit clusters: value 0 x4 at index 0, value 1 x4 at index 1

    const auto make_seq = [&](std::vector<std::vector<double>> evs) {
        std::vector<IndexedSpectrum> seq;
        for (auto& ev : evs)
            seq.push_back(ncg::index_spectrum(ncg::cluster_multiplicities(ev, 1e-8)));
        return ncg::track_sequence(seq);
    };

    // constant multiplicity 4 at index 0 -> equal
    auto rep = make_seq({{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}});
    auto rows = ncg::multiplicity_convergence(rep, limit);
    REQUIRE(!rows.empty());
    CHECK(rows[0].verdict == V::kEqual);
    CHECK(rows[0].eventual == 4);

    // (2,3,4,4,4) -> eventually constant at 4 -> equal
    rep = make_seq({{0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0},
                    {0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}});
    rows = ncg::multiplicity_convergence(rep, limit);
    CHECK(rows[0].verdict == V::kEqual);
    CHECK(rows[0].eventual == 4);

    // eventual 2 < limit 4 -> violated
    rep = make_seq({{0.0, 0.0}, {0.0, 0.0}});
    rows = ncg::multiplicity_convergence(rep, limit);
    CHECK(rows[0].verdict == V::kViolated);

    // eventual 6 > limit 4 -> consistent with the liminf bound
    rep = make_seq({{0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}});
    rows = ncg::multiplicity_convergence(rep, limit);
    CHECK(rows[0].verdict == V::kConsistentWithLiminf);

    CHECK(ncg::to_string(V::kEqual) != ncg::to_string(V::kViolated));
}

TEST_CASE("fuzzy torus cluster values are symmetric about zero") {
    const auto ev = ncg::eigh_values(ncg::dirac_fuzzy(4).dirac);
    const double opn = std::max(std::abs(ev.front()), std::abs(ev.back()));
    const auto s = ncg::cluster_multiplicities(ev, ncg::default_cluster_tol(opn));
    for (const auto& c : s.clusters) {
        double best = 1e300;
        for (const auto& d : s.clusters) best = std::min(best, std::abs(d.value + c.value));
        CHECK(best <= 1e-9);
    }
}

TEST_CASE("default cluster tolerance scales with the operator norm") {
    CHECK(ncg::default_cluster_tol(0.5) == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(ncg::default_cluster_tol(10.0) == doctest::Approx(1e-5).epsilon(1e-12));
}
