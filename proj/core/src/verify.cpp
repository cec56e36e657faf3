#include "ncgspectra/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "ncgspectra/bundle.hpp"
#include "ncgspectra/commands.hpp"
#include "ncgspectra/dynamics.hpp"
#include "ncgspectra/eigh.hpp"
#include "ncgspectra/fuzzy_torus.hpp"
#include "ncgspectra/quantum_metric.hpp"
#include "ncgspectra/spectral_analysis.hpp"

namespace ncg {

namespace {
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

double urand(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

struct Ctx {
    std::map<std::size_t, std::vector<double>> values;
    std::map<std::size_t, HermitianEigenDecomposition> full;

    const std::vector<double>& vals(std::size_t n) {
        if (auto it = values.find(n); it != values.end()) return it->second;
        if (auto f = full.find(n); f != full.end())
            return values.emplace(n, f->second.eigenvalues).first->second;
        return values.emplace(n, eigh_values(dirac_fuzzy(n).dirac)).first->second;
    }

    const HermitianEigenDecomposition& decomp(std::size_t n) {
        if (auto it = full.find(n); it != full.end()) return it->second;
        auto& e = full.emplace(n, eigh(dirac_fuzzy(n).dirac)).first->second;
        values.insert_or_assign(n, e.eigenvalues);
        return e;
    }
};

CriterionResult criterion_1() {
    CriterionResult r{1, "construction invariants", true, "", 0.0};
    double worst = 0.0;
    const auto gs = gamma_matrices();
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            ComplexMatrix anti = gs[a] * gs[b];
            anti += gs[b] * gs[a];
            if (a == b) {
                ComplexMatrix two = ComplexMatrix::identity(4);
                two *= 2.0;
                anti -= two;
            }
            worst = std::max(worst, anti.max_abs());
        }
    for (std::size_t n = 2; n <= 16; ++n) {
        const FuzzyTorusTriple t = dirac_fuzzy(n);
        worst = std::max(worst, hermiticity_defect(t.dirac));

        const ComplexMatrix gamma = kron(ComplexMatrix::identity(n * n), gamma_five());
        ComplexMatrix chir = gamma * t.dirac * gamma;
        chir += t.dirac;
        worst = std::max(worst, chir.max_abs());

        ComplexMatrix comm = t.shift * t.clock;
        ComplexMatrix uv = t.clock * t.shift;
        const double th = 2.0 * std::numbers::pi / static_cast<double>(n);
        uv *= cplx{std::cos(th), std::sin(th)};
        comm -= uv;
        worst = std::max(worst, comm.max_abs());
    }
    r.passed = worst <= 1e-12;
    r.detail = "max defect " + fmt(worst) + " over n in {2..16} (bound 1e-12)";
    return r;
}

CriterionResult criterion_2(Ctx& ctx) {
    CriterionResult r{2, "closed-form reconciliation", true, "", 0.0};
    double worst = 0.0;
    for (std::size_t n = 3; n <= 8; ++n) {
        const std::vector<double>& ev = ctx.vals(n);
        const ClosedFormSpectrum cf = fuzzy_spectrum_closed_form(n);
        for (std::size_t i = 0; i < ev.size(); ++i)
            worst = std::max(worst, std::abs(ev[i] - cf.values[i]));
    }
    RunConfig mini;
    mini.n_list = {2};
    mini.cache_enabled = false;
    mini.write_files = false;
    const ResultBundle b = cmd_spectrum(mini);
    const bool emitted = b.metadata.closed_form_convention == kClosedFormConvention &&
                         !b.metadata.closed_form_convention.empty();
    r.passed = worst <= 1e-8 && emitted;
    r.detail = "sorted linf " + fmt(worst) + " over n in {3..8} (bound 1e-8); convention " +
               (emitted ? "emitted" : "MISSING");
    return r;
}

CriterionResult criterion_3(Ctx& ctx) {
    CriterionResult r{3, "spectrum convergence", true, "", 0.0};
    const double radius = 3.0;
    const std::vector<std::size_t> ns = {4, 8, 16, 24};

    const LimitSpectrum limit = limit_spectrum(32);
    std::vector<double> limit_window;
    for (double v : limit.values)
        if (std::abs(v) <= radius) limit_window.push_back(v);

    std::vector<double> dists;
    for (std::size_t n : ns) {
        std::vector<double> win;
        for (double v : ctx.vals(n))
            if (std::abs(v) <= radius) win.push_back(v);
        dists.push_back(hausdorff_distance(win, limit_window));
    }
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < dists.size(); ++i)
        if (!(dists[i + 1] < dists[i])) decreasing = false;

    auto nearest = [](const std::vector<double>& sorted_vals, double x) {
        double best = std::numeric_limits<double>::infinity();
        for (double v : sorted_vals) best = std::min(best, std::abs(v - x));
        return best;
    };
    bool closer = true;
    double worst_gap = 0.0;
    for (double v : limit_window) {
        const double d24 = nearest(ctx.vals(24), v);
        const double d4 = nearest(ctx.vals(4), v);
        worst_gap = std::max(worst_gap, d24 - d4);
        if (!(d24 <= d4 + 1e-12)) closer = false;
    }

    std::ostringstream os;
    os << "hausdorff";
    for (double d : dists) os << " " << fmt(d);
    os << (decreasing ? " strictly decreasing" : " NOT decreasing") << "; nearest-point d24-d4 max "
       << fmt(worst_gap);
    r.passed = decreasing && closer;
    r.detail = os.str();
    return r;
}

CriterionResult criterion_4(Ctx& ctx) {
    CriterionResult r{4, "calculus route agreement", true, "", 0.0};
    double worst_ratio = 0.0;
    for (const double width : {0.5, 1.0, 2.0}) {
        const SpectralFunction f = SpectralFunction::gaussian(width);
        for (const std::size_t n : {2, 4, 8}) {
            const double eps = n <= 4 ? 1e-6 : 1e-3;
            const FuzzyTorusTriple t = dirac_fuzzy(n);
            DiracCalculus calc(t.dirac, ctx.decomp(n));
            ComplexMatrix delta = calc.apply_fourier(f, eps);
            delta -= calc.apply_eig(f);
            const double d = operator_norm(delta);
            worst_ratio = std::max(worst_ratio, d / eps);
            if (!(d <= eps)) r.passed = false;
        }
    }
    r.detail = "worst delta/eps " + fmt(worst_ratio) +
               " over widths {0.5,1,2}, n in {2,4,8} (eps 1e-6 at n<=4, 1e-3 at n=8)";
    return r;
}

CriterionResult criterion_5(Ctx& ctx) {
    CriterionResult r{5, "projection multiplicities", true, "", 0.0};
    const std::size_t n = 8;
    const HermitianEigenDecomposition& e = ctx.decomp(n);
    const double op_norm_d = std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
    const IndexedSpectrum s =
        index_spectrum(cluster_multiplicities(e.eigenvalues, default_cluster_tol(op_norm_d)));
    const FuzzyTorusTriple t = dirac_fuzzy(n);
    DiracCalculus calc(t.dirac, e);

    std::size_t checked = 0;
    double worst_proj = 0.0;
    for (std::size_t ci = 0; ci < s.clusters.size(); ++ci) {
        const double c = s.clusters[ci].value;
        if (std::abs(c) > 2.0) continue;
        ++checked;
        double gap = std::numeric_limits<double>::infinity();
        if (ci > 0) gap = std::min(gap, c - s.clusters[ci - 1].value);
        if (ci + 1 < s.clusters.size()) gap = std::min(gap, s.clusters[ci + 1].value - c);
        const double radius = std::min(0.03, gap / 2.0);
        const ComplexMatrix p = calc.apply_eig(SpectralFunction::bump(c, radius));

        ComplexMatrix idem = p * p;
        idem -= p;
        const double defect = operator_norm(idem);
        worst_proj = std::max(worst_proj, defect);
        if (!(defect <= 1e-9)) r.passed = false;

        const std::vector<double> pev = eigh_values(p);
        std::size_t rank = 0;
        for (double v : pev)
            if (v > 0.5) ++rank;
        if (rank != s.clusters[ci].multiplicity) r.passed = false;

        std::vector<std::vector<cplx>> family;
        for (std::size_t j = 0; j < e.eigenvalues.size(); ++j)
            if (std::abs(e.eigenvalues[j] - c) <= s.cluster_tol) family.push_back(e.eigenvector(j));
        if (family.size() != s.clusters[ci].multiplicity ||
            !gram_independent(family, 1.0 - 1e-6))
            r.passed = false;
    }
    r.detail = std::to_string(checked) + " clusters in |lambda| <= 2, worst ||P^2-P|| " +
               fmt(worst_proj) + " (bound 1e-9), ranks and gram checks " +
               (r.passed ? "hold" : "FAIL");
    return r;
}

CriterionResult criterion_6(Ctx& ctx) {
    CriterionResult r{6, "spectral action trend", true, "", 0.0};
    const double width = 0.75;
    const std::vector<std::size_t> ns = {4, 8, 16, 24};
    std::vector<double> traces;
    for (std::size_t n : ns) {
        double s = 0.0;
        for (double l : ctx.vals(n)) s += std::exp(-(l * l) / (width * width));
        traces.push_back(s);
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < traces.size(); ++i)
        diffs.push_back(std::abs(traces[i + 1] - traces[i]));
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
        if (!(diffs[i + 1] < diffs[i])) decreasing = false;
    r.passed = decreasing;
    std::ostringstream os;
    os << "gaussian width " << width << ", |T(n+)-T(n)|";
    for (double d : diffs) os << " " << fmt(d);
    os << (decreasing ? " decreasing" : " NOT decreasing");
    r.detail = os.str();
    return r;
}

CriterionResult criterion_7() {
    CriterionResult r{7, "mk distance fixtures", true, "", 0.0};
    const FuzzyTorusTriple t = dirac_fuzzy(2);
    const MKConfig cfg;

    ComplexMatrix m2(2), m3(2);
    m2(0, 0) = 0.7;
    m2(0, 1) = cplx{0.2, -0.1};
    m2(1, 0) = cplx{0.2, 0.1};
    m2(1, 1) = 0.3;
    m3(0, 0) = 0.4;
    m3(0, 1) = cplx{0.0, -0.1};
    m3(1, 0) = cplx{0.0, 0.1};
    m3(1, 1) = 0.6;

    const std::vector<std::pair<DensityState, DensityState>> fixtures = {
        {DensityState::vector_state(2, 0), DensityState::vector_state(2, 1)},
        {DensityState(m2), DensityState(m3)},
        {DensityState::vector_state(2, 0), DensityState::maximally_mixed(2)},
    };

    double worst_rel = 0.0, worst_sym = 0.0, worst_scale = 0.0, worst_lip = 0.0, worst_tr = 0.0;
    const FuzzyTorusTriple t2 = scaled_triple(t, 2.0);
    for (const auto& [phi, psi] : fixtures) {
        const MKResult a = mk_distance(t, phi, psi, cfg);
        const MKResult b = mk_distance(t, psi, phi, cfg);
        const double oracle = mk_bruteforce_oracle(t, phi, psi, 2000, 1);
        if (oracle > 0.0)
            worst_rel = std::max(worst_rel, std::abs(a.lower_bound - oracle) / oracle);
        worst_sym = std::max(worst_sym, std::abs(a.estimate - b.estimate));

        const MKResult sc = mk_distance(t2, phi, psi, cfg);
        if (a.estimate > 0.0)
            worst_scale =
                std::max(worst_scale, std::abs(sc.estimate - a.estimate / 2.0) / (a.estimate / 2.0));

        for (const MKResult* res : {&a, &b}) {
            worst_lip = std::max(worst_lip, lip_seminorm(t, res->witness));
            cplx tr{};
            for (std::size_t i = 0; i < 2; ++i) tr += res->witness(i, i);
            worst_tr = std::max(worst_tr, std::abs(tr));
        }
        worst_lip = std::max(worst_lip, lip_seminorm(t2, sc.witness));
        if (a.unbounded_direction_detected || b.unbounded_direction_detected ||
            sc.unbounded_direction_detected)
            r.passed = false;
    }
    if (worst_rel > 0.02 || worst_sym > 1e-9 || worst_scale > 0.02 ||
        worst_lip > 1.0 + 1e-9 || worst_tr > 1e-12)
        r.passed = false;
    r.detail = "oracle rel gap " + fmt(worst_rel) + " (<=2%), symmetry " + fmt(worst_sym) +
               ", scale rel " + fmt(worst_scale) + " (<=2%), witness lip " + fmt(worst_lip) +
               ", |trace| " + fmt(worst_tr);
    return r;
}

CriterionResult criterion_8() {
    CriterionResult r{8, "dynamics bounds", true, "", 0.0};
    const FuzzyTorusTriple t = dirac_fuzzy(3);
    DiracCalculus calc(t.dirac);
    const std::size_t dim = t.dirac.dim();
    std::mt19937_64 gen(0);

    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double s = 4.0 * urand(gen) - 2.0;
        const double u = 4.0 * urand(gen) - 2.0;

        std::vector<cplx> xi(dim);
        for (auto& z : xi) z = cplx{2.0 * urand(gen) - 1.0, 2.0 * urand(gen) - 1.0};
        const double gn = graph_norm(t.dirac, xi);
        for (auto& z : xi) z /= gn;

        const ComplexMatrix us = calc.unitary_group(s);
        const ComplexMatrix uu = calc.unitary_group(u);

        ComplexMatrix law = calc.unitary_group(s + u);
        law -= us * uu;
        worst = std::max(worst, law.frobenius_norm());

        ComplexMatrix unit = us * us.dagger();
        unit -= ComplexMatrix::identity(dim);
        worst = std::max(worst, unit.frobenius_norm());

        const std::vector<cplx> uxi = matvec(us, xi);
        worst = std::max(worst, std::abs(graph_norm(t.dirac, uxi) - graph_norm(t.dirac, xi)));

        const auto [disp, bound] = unitary_displacement(calc, s, u, xi);
        worst = std::max(worst, disp - bound);
    }
    r.passed = worst <= 1e-9;
    r.detail = "worst violation " + fmt(worst) +
               " over 100 graph-norm-1 vectors (group law, unitarity, isometry, displacement; "
               "bound 1e-9)";
    return r;
}

ResultBundle random_bundle(std::mt19937_64& gen) {
    ResultBundle b;
    b.metadata.tool_version = "0.1.0";
    b.metadata.closed_form_convention = "c";
    b.metadata.seed = gen();
    b.metadata.convention_hash = gen();
    b.metadata.cache_events = {"n=2: hit"};
    auto rd = [&] { return 20.0 * urand(gen) - 10.0; };
    b.spectrum_summaries.push_back({2, rd(), rd(), rd(), gen() % 4});
    b.spectra.push_back({2, rd(), static_cast<int>(gen() % 7) - 3, rd(), 1 + gen() % 8});
    b.hausdorff.push_back({4, rd(), rd(), rd()});
    IndexTrack tr;
    tr.index = static_cast<int>(gen() % 5) - 2;
    tr.values = {rd(), rd()};
    tr.multiplicities = {1 + gen() % 4, 1 + gen() % 4};
    tr.deviations = {rd(), 0.0};
    tr.limit_candidate = rd();
    tr.deviations_decreasing = (gen() & 1) != 0;
    tr.present_in_all = true;
    b.tracking.tracks.push_back(tr);
    b.tracking.warnings = {"w"};
    b.multiplicity.push_back(
        {0, 1 + gen() % 4, 2, 1 + gen() % 4, true, MultiplicityVerdict::kConsistentWithLiminf});
    b.action.push_back({4, "gaussian", rd(), std::abs(rd()) + 0.1, rd()});
    b.action_differences.push_back({1.0, 4, 8, std::abs(rd())});
    b.calculus.push_back({4, 1.0, 1e-6, std::abs(rd()), rd(), rd(), rd(), gen() % 4096});
    MKRow mk;
    mk.n = 2;
    mk.state_a = "e0";
    mk.state_b = "e1";
    mk.null_tol = 1e-8;
    mk.lower_bound = rd();
    mk.estimate = rd();
    mk.oracle = rd();
    mk.oracle_delta = rd();
    mk.iterations = gen() % 4000;
    mk.converged = true;
    mk.witness = {rd(), rd(), rd(), rd()};
    b.mk.push_back(mk);
    return b;
}

CriterionResult criterion_9() {
    CriterionResult r{9, "metric axioms and bundle round-trip", true, "", 0.0};
    std::mt19937_64 gen(0);
    auto random_set = [&] {
        std::vector<double> s(1 + gen() % 8);
        for (auto& v : s) v = 10.0 * urand(gen) - 5.0;
        return s;
    };
    std::size_t failures = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        const std::vector<double> a = random_set(), b = random_set(), c = random_set();
        const double dab = hausdorff_distance(a, b);
        const double dba = hausdorff_distance(b, a);
        const double daa = hausdorff_distance(a, a);
        const double dac = hausdorff_distance(a, c);
        const double dbc = hausdorff_distance(b, c);
        if (daa != 0.0 || dab != dba || dac > dab + dbc) ++failures;
        if (inst % 50 == 0) {
            const ResultBundle rb = random_bundle(gen);
            const std::string s1 = serialize_bundle(rb);
            const ResultBundle parsed = parse_bundle(s1);
            if (!(parsed == rb) || serialize_bundle(parsed) != s1 || serialize_bundle(rb) != s1)
                ++failures;
        }
    }
    r.passed = failures == 0;
    r.detail = std::to_string(failures) + " failures in 1000 instances (exact)";
    return r;
}
}  // namespace

VerifyReport run_acceptance(const VerifyOptions& opts) {
    VerifyReport rep;
    Ctx ctx;
    const auto run = [&](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult c = fn();
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.number == 1 && c.seconds > 60.0) {
            c.passed = false;
            c.detail += "; runtime " + fmt(c.seconds) + "s exceeds 60s";
        }
        if (c.number == 3 && c.seconds > 600.0) {
            c.passed = false;
            c.detail += "; runtime " + fmt(c.seconds) + "s exceeds 600s";
        }
        rep.total_seconds += c.seconds;
        if (opts.progress) {
            char line[512];
            std::snprintf(line, sizeof(line), "criterion %d: %s  %s (%s) [%.1fs]\n", c.number,
                          c.passed ? "pass" : "FAIL", c.name.c_str(), c.detail.c_str(), c.seconds);
            (*opts.progress) << line << std::flush;
        }
        rep.criteria.push_back(std::move(c));
    };

    run([&] { return criterion_1(); });
    run([&] { return criterion_2(ctx); });
    run([&] { return criterion_3(ctx); });
    run([&] { return criterion_4(ctx); });
    run([&] { return criterion_5(ctx); });
    run([&] { return criterion_6(ctx); });
    run([&] { return criterion_7(); });
    run([&] { return criterion_8(); });
    run([&] { return criterion_9(); });

    rep.all_passed = true;
    for (const auto& c : rep.criteria)
        if (!c.passed) rep.all_passed = false;
    return rep;
}

void print_report(const VerifyReport& r, std::ostream& os) {
    for (const auto& c : r.criteria) {
        char line[512];
        std::snprintf(line, sizeof(line), "criterion %d: %s  %s (%s) [%.1fs]\n", c.number,
                      c.passed ? "pass" : "FAIL", c.name.c_str(), c.detail.c_str(), c.seconds);
        os << line;
    }
    char tail[128];
    std::snprintf(tail, sizeof(tail), "acceptance: %zu/%zu passed [%.1fs]\n",
                  static_cast<std::size_t>(
                      std::count_if(r.criteria.begin(), r.criteria.end(),
                                    [](const CriterionResult& c) { return c.passed; })),
                  r.criteria.size(), r.total_seconds);
    os << tail;
}

}  // namespace ncg
