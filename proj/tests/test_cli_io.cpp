#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ncgspectra/bundle.hpp"
#include "ncgspectra/commands.hpp"
#include "ncgspectra/eigh_cache.hpp"
#include "ncgspectra/fuzzy_torus.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("ncgspectra_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ncg::RunConfig quiet_config() {
    ncg::RunConfig c;
    c.write_files = false;
    c.cache_enabled = false;
    return c;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FUZZYTORUS_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config validation") {
    auto c = quiet_config();
    c.n_list = {};
    CHECK_THROWS(ncg::validate_config(c));
    c.n_list = {4, 2};
    CHECK_THROWS(ncg::validate_config(c));
    c.n_list = {2, 2};
    CHECK_THROWS(ncg::validate_config(c));
    c.n_list = {0};
    CHECK_THROWS(ncg::validate_config(c));

    c = quiet_config();
    c.width = 0.0;
    CHECK_THROWS(ncg::validate_config(c));
    c = quiet_config();
    c.function_kind = "sinc";
    CHECK_THROWS(ncg::validate_config(c));
    c = quiet_config();
    c.scales = {1.0, -1.0};
    CHECK_THROWS(ncg::validate_config(c));
    c = quiet_config();
    CHECK_NOTHROW(ncg::validate_config(c));
}

TEST_CASE("spectrum command on the 1x1 algebra") {
    auto c = quiet_config();
    c.n_list = {1};
    const auto b = ncg::cmd_spectrum(c);
    REQUIRE(b.spectra.size() == 1);
    CHECK(b.spectra[0].n == 1);
    CHECK(b.spectra[0].value == 0.0);
    CHECK(b.spectra[0].multiplicity == 4);
    CHECK(b.spectra[0].index == 0);
    REQUIRE(b.spectrum_summaries.size() == 1);
    CHECK(b.spectrum_summaries[0].op_norm == 0.0);
    // every row carries its n and the tolerance that produced it
    CHECK(b.spectra[0].cluster_tol > 0.0);
    CHECK(b.hausdorff.size() == 1);
    CHECK(b.hausdorff[0].n == 1);
    CHECK(b.hausdorff[0].cluster_tol == b.spectra[0].cluster_tol);
}

TEST_CASE("action command on the 1x1 algebra") {
    auto c = quiet_config();
    c.n_list = {1};
    c.scales = {0.5, 1.0};
    const auto b = ncg::cmd_action(c);
    REQUIRE(b.action.size() == 2);
    for (const auto& row : b.action) {
        CHECK(row.trace == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(row.n == 1);
        CHECK(row.kind == "gaussian");
    }
    CHECK(b.action_differences.empty());
}

TEST_CASE("metadata carries the resolved closed-form convention") {
    auto c = quiet_config();
    c.n_list = {2};
    const auto b = ncg::cmd_spectrum(c);
    CHECK(b.metadata.closed_form_convention == ncg::kClosedFormConvention);
    CHECK(b.metadata.convention_hash == ncg::dirac_convention_hash());
    CHECK(b.metadata.schema_version == 1);
    CHECK(b.metadata.timestamp.empty());
    REQUIRE(b.spectrum_summaries.size() == 1);
    CHECK(b.spectrum_summaries[0].closed_form_linf >= 0.0);
    CHECK(b.spectrum_summaries[0].closed_form_linf <= 1e-8);
}

TEST_CASE("spectrum pipeline: hausdorff column decreases and caching is transparent") {
    const fs::path cachedir = temp_dir("cache_pipeline");
    ::unsetenv("NCGSPECTRA_CACHE_DIR");

    ncg::RunConfig c;
    c.n_list = {4, 8, 16};
    c.window_radius = 3.0;
    c.write_files = false;
    c.cache_enabled = true;
    c.cache_dir = cachedir.string();

    const auto first = ncg::cmd_spectrum(c);
    REQUIRE(first.hausdorff.size() == 3);
    CHECK(first.hausdorff[1].distance < first.hausdorff[0].distance);
    CHECK(first.hausdorff[2].distance < first.hausdorff[1].distance);
    CHECK_FALSE(first.metadata.cache_hit_all);

    const auto second = ncg::cmd_spectrum(c);
    CHECK(second.metadata.cache_hit_all);
    auto a = first, b = second;
    a.metadata.cache_events.clear();
    b.metadata.cache_events.clear();
    a.metadata.cache_hit_all = b.metadata.cache_hit_all = false;
    CHECK(a == b);

    // action on the warmed cache: successive differences decrease
    ncg::RunConfig ca = c;
    ca.width = 0.75;
    const auto act = ncg::cmd_action(ca);
    CHECK(act.metadata.cache_hit_all);
    REQUIRE(act.action_differences.size() == 2);
    CHECK(act.action_differences[1].abs_difference < act.action_differences[0].abs_difference);

    // calculus route deltas on the warmed cache stay within the certified eps
    ncg::RunConfig cc = c;
    cc.n_list = {2, 4};
    cc.calculus_eps = 1e-6;
    const auto calc = ncg::cmd_calculus(cc);
    REQUIRE(calc.calculus.size() == 2);
    for (const auto& row : calc.calculus) {
        CHECK(row.route_delta <= row.eps);
        CHECK(row.cutoff > 0.0);
        CHECK(row.evaluations > 0);
        CHECK(row.tail_bound <= 0.5 * row.eps * 1.0001);
    }

    fs::remove_all(cachedir);
}

TEST_CASE("corrupt cache files are rebuilt with a warning") {
    const fs::path cachedir = temp_dir("cache_corrupt");
    ::unsetenv("NCGSPECTRA_CACHE_DIR");
    ncg::CacheSettings cs{true, cachedir};

    const auto t = ncg::dirac_fuzzy(2);
    ncg::CacheStats s1;
    (void)ncg::cached_eigh(2, t.dirac, cs, &s1);
    CHECK_FALSE(s1.hit);
    CHECK(s1.wrote);

    const fs::path file = ncg::cache_file_path(cs, 2);
    REQUIRE(fs::exists(file));
    {
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        out << "garbage";
    }
    ncg::CacheStats s2;
    const auto e = ncg::cached_eigh(2, t.dirac, cs, &s2);
    CHECK_FALSE(s2.hit);
    CHECK(s2.corrupt_rebuilt);
    CHECK(!s2.warning.empty());
    CHECK(e.eigenvalues.size() == 16);

    ncg::CacheStats s3;
    (void)ncg::cached_eigh(2, t.dirac, cs, &s3);
    CHECK(s3.hit);
    fs::remove_all(cachedir);
}

TEST_CASE("cache directory resolution order") {
    ::unsetenv("NCGSPECTRA_CACHE_DIR");
    CHECK(ncg::resolve_cache_dir("", "fallback") == fs::path("fallback"));
    CHECK(ncg::resolve_cache_dir("configured", "fallback") == fs::path("configured"));
    ::setenv("NCGSPECTRA_CACHE_DIR", "/tmp/envcache", 1);
    CHECK(ncg::resolve_cache_dir("configured", "fallback") == fs::path("/tmp/envcache"));
    ::unsetenv("NCGSPECTRA_CACHE_DIR");
}

TEST_CASE("mk command emits oracle cross-checks at small n") {
    auto c = quiet_config();
    c.n_list = {2};
    const auto b = ncg::cmd_mk(c);
    REQUIRE(b.mk.size() == 3);  // (e0,e1), (e0,mixed), (e1,mixed)
    for (const auto& row : b.mk) {
        CHECK(row.n == 2);
        CHECK_FALSE(row.unbounded);
        CHECK(row.lower_bound > 0.0);
        CHECK(row.oracle >= 0.0);
        CHECK(row.oracle_delta <= 0.03 * row.oracle + 1e-9);
        CHECK(row.witness.size() == 8);
        CHECK(row.null_tol == c.mk.null_tol);
    }
}

TEST_CASE("mk command skips oversized n with a note") {
    auto c = quiet_config();
    c.n_list = {9};
    const auto b = ncg::cmd_mk(c);
    CHECK(b.mk.empty());
    REQUIRE(b.metadata.cache_events.size() == 1);
    CHECK(b.metadata.cache_events[0].find("skipped") != std::string::npos);
}

TEST_CASE("bundle serialization round-trips exactly") {
    auto c = quiet_config();
    c.n_list = {1, 2};
    const auto b = ncg::cmd_spectrum(c);

    const std::string s1 = ncg::serialize_bundle(b);
    const auto parsed = ncg::parse_bundle(s1);
    CHECK(parsed == b);
    CHECK(ncg::serialize_bundle(parsed) == s1);

    // determinism across a fresh identical run
    const auto again = ncg::cmd_spectrum(c);
    CHECK(ncg::serialize_bundle(again) == s1);
}

TEST_CASE("written files: bundle plus one csv per nonempty table") {
    const fs::path out = temp_dir("write");
    ncg::RunConfig c;
    c.n_list = {1, 2};
    c.cache_enabled = false;
    c.output_dir = out.string();
    const auto b = ncg::cmd_spectrum(c);

    CHECK(fs::exists(out / "bundle.json"));
    CHECK(fs::exists(out / "spectra.csv"));
    CHECK(fs::exists(out / "hausdorff.csv"));
    CHECK_FALSE(fs::exists(out / "mk.csv"));  // table empty for this command

    const auto parsed = ncg::parse_bundle(slurp(out / "bundle.json"));
    CHECK(parsed == b);

    const std::string csv = slurp(out / "spectra.csv");
    CHECK(csv.find("n,") == 0);
    CHECK(csv.find("cluster_tol") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("csv float formatting uses 12 significant digits") {
    CHECK(ncg::csv_format(0.0) == "0");
    CHECK(ncg::csv_format(1.0 / 3.0) == "0.333333333333");
    CHECK(ncg::csv_format(2.0) == "2");
}

TEST_CASE("cli: help and error exit codes") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("spectrum --no-such-flag") == 1);
    CHECK(run_cli("") == 1);  // missing subcommand
    // config validation failure surfaces as an error
    CHECK(run_cli("spectrum --run.n-list 4,2 --io.output-dir /tmp/ncgspectra_cli_bad") == 1);
}

TEST_CASE("cli: flags override the config file, file overrides defaults") {
    const fs::path dir = temp_dir("cli");
    const fs::path cfg = dir / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "[function]\n"
            << "width=2.0\n"
            << "[run]\n"
            << "n-list=1\n"
            << "[io]\n"
            << "cache=false\n";
    }

    const fs::path out1 = dir / "from_file";
    REQUIRE(run_cli("action --config " + cfg.string() + " --io.output-dir " + out1.string()) == 0);
    const auto b1 = ncg::parse_bundle(slurp(out1 / "bundle.json"));
    REQUIRE(!b1.action.empty());
    CHECK(b1.action[0].width == 2.0);
    CHECK(b1.action[0].n == 1);

    const fs::path out2 = dir / "flag_wins";
    REQUIRE(run_cli("action --config " + cfg.string() + " --function.width 3.0 --io.output-dir " +
                    out2.string()) == 0);
    const auto b2 = ncg::parse_bundle(slurp(out2 / "bundle.json"));
    REQUIRE(!b2.action.empty());
    CHECK(b2.action[0].width == 3.0);

    fs::remove_all(dir);
}

TEST_CASE("cli: spectrum run writes a parseable bundle") {
    const fs::path dir = temp_dir("cli_spec");
    REQUIRE(run_cli("spectrum --run.n-list 2 --io.no-cache --io.output-dir " + dir.string()) == 0);
    const auto b = ncg::parse_bundle(slurp(dir / "bundle.json"));
    REQUIRE(b.spectra.size() == 3);  // n=2 clusters: -lambda, 0, +lambda
    CHECK(b.spectra[1].multiplicity == 8);
    fs::remove_all(dir);
}
