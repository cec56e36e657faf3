#include "ncgspectra/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <future>
#include <stdexcept>

#include "ncgspectra/dynamics.hpp"
#include "ncgspectra/eigh_cache.hpp"
#include "ncgspectra/fuzzy_torus.hpp"

namespace ncg {

namespace {
constexpr const char* kToolVersion = "0.1.0";

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

BundleMetadata base_metadata(const RunConfig& c) {
    BundleMetadata m;
    m.tool_version = kToolVersion;
    m.timestamp = c.emit_timestamps ? utc_timestamp() : "";
    m.closed_form_convention = kClosedFormConvention;
    m.convention_hash = dirac_convention_hash();
    m.seed = c.mk.seed;
    return m;
}

CacheSettings cache_settings(const RunConfig& c) {
    CacheSettings cs;
    cs.enabled = c.cache_enabled;
    cs.dir = resolve_cache_dir(c.cache_dir,
                               std::filesystem::path(c.output_dir) / "cache");
    return cs;
}

SpectralFunction make_function(const RunConfig& c) {
    if (c.function_kind == "gaussian") return SpectralFunction::gaussian(c.width);
    if (c.function_kind == "bump") return SpectralFunction::bump(c.center, c.radius);
    throw std::invalid_argument("unknown function kind: " + c.function_kind);
}

struct PerN {
    std::size_t n = 0;
    HermitianEigenDecomposition decomposition;
    CacheStats cache;
};

PerN decompose_one(std::size_t n, const CacheSettings& cs) {
    PerN p;
    p.n = n;
    const FuzzyTorusTriple t = dirac_fuzzy(n);
    p.decomposition = cached_eigh(n, t.dirac, cs, &p.cache);
    return p;
}

// chronological per-n decompositions; work items run concurrently
std::vector<PerN> decompose_all(const RunConfig& c, const CacheSettings& cs) {
    std::vector<std::future<PerN>> futs;
    futs.reserve(c.n_list.size());
    for (std::size_t n : c.n_list)
        futs.push_back(std::async(std::launch::async, decompose_one, n, std::cref(cs)));
    std::vector<PerN> out;
    out.reserve(futs.size());
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

void record_cache(const std::vector<PerN>& per_n, BundleMetadata& meta) {
    bool all_hit = !per_n.empty();
    for (const auto& p : per_n) {
        std::string ev = "n=" + std::to_string(p.n) + ": " +
                         (p.cache.hit ? "hit" : (p.cache.wrote ? "miss, wrote" : "miss"));
        if (p.cache.corrupt_rebuilt) ev += " (rebuilt: " + p.cache.warning + ")";
        meta.cache_events.push_back(std::move(ev));
        if (!p.cache.hit) all_hit = false;
    }
    meta.cache_hit_all = all_hit;
}

double resolved_tol(const RunConfig& c, double op_norm) {
    return c.cluster_tol > 0.0 ? c.cluster_tol : default_cluster_tol(op_norm);
}

IndexedSpectrum limit_indexed(const RunConfig& c) {
    const LimitSpectrum ls = limit_spectrum(c.limit_index_max);
    IndexedSpectrum s;
    s.cluster_tol = 1e-12;
    s.clusters.reserve(ls.values.size());
    for (double v : ls.values) {
        const auto it = ls.generators.find(v);
        s.clusters.push_back({v, it == ls.generators.end() ? 1 : it->second});
    }
    return index_spectrum(std::move(s));
}

void finish(ResultBundle& b, const RunConfig& c) {
    if (c.write_files) write_bundle(b, c.output_dir);
}
}  // namespace

void validate_config(const RunConfig& c) {
    if (c.n_list.empty()) throw std::invalid_argument("config: n_list must be nonempty");
    for (std::size_t n : c.n_list)
        if (n == 0) throw std::invalid_argument("config: n values must be positive");
    if (!std::is_sorted(c.n_list.begin(), c.n_list.end()) ||
        std::adjacent_find(c.n_list.begin(), c.n_list.end()) != c.n_list.end())
        throw std::invalid_argument("config: n_list must be strictly ascending");
    if (!(c.window_radius > 0.0)) throw std::invalid_argument("config: window_radius must be > 0");
    if (c.cluster_tol < 0.0) throw std::invalid_argument("config: cluster_tol must be >= 0");
    if (!(c.calculus_eps > 0.0)) throw std::invalid_argument("config: calculus_eps must be > 0");
    if (c.scales.empty()) throw std::invalid_argument("config: scales must be nonempty");
    for (double s : c.scales)
        if (!(s > 0.0)) throw std::invalid_argument("config: scales must be positive");
    if (c.function_kind != "gaussian" && c.function_kind != "bump")
        throw std::invalid_argument("config: function kind must be gaussian or bump");
    if (!(c.width > 0.0)) throw std::invalid_argument("config: width must be > 0");
    if (!(c.radius > 0.0)) throw std::invalid_argument("config: radius must be > 0");
    if (c.mk.restarts == 0 || c.mk.iterations == 0)
        throw std::invalid_argument("config: mk restarts and iterations must be positive");
    if (!(c.mk.step_c > 0.0)) throw std::invalid_argument("config: mk step_c must be > 0");
    if (!(c.mk.null_tol > 0.0)) throw std::invalid_argument("config: mk null_tol must be > 0");
    if (c.oracle_samples == 0) throw std::invalid_argument("config: oracle_samples must be > 0");
}

ResultBundle cmd_spectrum(const RunConfig& c) {
    validate_config(c);
    const CacheSettings cs = cache_settings(c);
    const std::vector<PerN> per_n = decompose_all(c, cs);

    ResultBundle b;
    b.metadata = base_metadata(c);
    record_cache(per_n, b.metadata);

    const IndexedSpectrum limit = limit_indexed(c);
    const std::vector<double> limit_window = windowed_spectrum(limit, c.window_radius);

    std::vector<IndexedSpectrum> indexed;
    indexed.reserve(per_n.size());
    for (const auto& p : per_n) {
        const std::vector<double>& ev = p.decomposition.eigenvalues;
        const double op_norm = ev.empty() ? 0.0 : std::max(std::abs(ev.front()), std::abs(ev.back()));
        const double tol = resolved_tol(c, op_norm);
        IndexedSpectrum s = index_spectrum(cluster_multiplicities(ev, tol));
        SpectrumSummary sum;
        sum.n = p.n;
        sum.cluster_tol = tol;
        sum.op_norm = op_norm;
        if (p.n >= 2) {
            const ClosedFormSpectrum cf = fuzzy_spectrum_closed_form(p.n);
            double linf = 0.0;
            for (std::size_t i = 0; i < ev.size(); ++i)
                linf = std::max(linf, std::abs(ev[i] - cf.values[i]));
            sum.closed_form_linf = linf;
            sum.discarded_branches = cf.discarded_branches;
        }
        b.spectrum_summaries.push_back(sum);
        for (std::size_t i = 0; i < s.clusters.size(); ++i) {
            SpectrumRow row;
            row.n = p.n;
            row.cluster_tol = tol;
            row.index = static_cast<int>(i) - static_cast<int>(*s.index_offset);
            row.value = s.clusters[i].value;
            row.multiplicity = s.clusters[i].multiplicity;
            b.spectra.push_back(row);
        }
        HausdorffRow h;
        h.n = p.n;
        h.window_radius = c.window_radius;
        h.cluster_tol = tol;
        h.distance = hausdorff_distance(windowed_spectrum(s, c.window_radius), limit_window);
        b.hausdorff.push_back(h);
        indexed.push_back(std::move(s));
    }

    if (indexed.size() >= 2) {
        b.tracking = track_sequence(indexed);
        b.multiplicity = multiplicity_convergence(b.tracking, limit);
    }
    finish(b, c);
    return b;
}

ResultBundle cmd_action(const RunConfig& c) {
    validate_config(c);
    const SpectralFunction f = make_function(c);
    const CacheSettings cs = cache_settings(c);
    const std::vector<PerN> per_n = decompose_all(c, cs);

    ResultBundle b;
    b.metadata = base_metadata(c);
    record_cache(per_n, b.metadata);

    for (double scale : c.scales) {
        for (const auto& p : per_n) {
            ActionRow row;
            row.n = p.n;
            row.kind = c.function_kind;
            row.width = c.function_kind == "gaussian" ? c.width : c.radius;
            row.scale = scale;
            double s = 0.0;
            for (double l : p.decomposition.eigenvalues) s += f.eval(l / scale);
            row.trace = s;
            b.action.push_back(row);
        }
        for (std::size_t i = 0; i + 1 < per_n.size(); ++i) {
            const ActionRow& lo = b.action[b.action.size() - per_n.size() + i];
            const ActionRow& hi = b.action[b.action.size() - per_n.size() + i + 1];
            ActionDiffRow d;
            d.scale = scale;
            d.n_from = lo.n;
            d.n_to = hi.n;
            d.abs_difference = std::abs(hi.trace - lo.trace);
            b.action_differences.push_back(d);
        }
    }
    finish(b, c);
    return b;
}

ResultBundle cmd_calculus(const RunConfig& c) {
    validate_config(c);
    if (c.function_kind != "gaussian")
        throw std::invalid_argument("cmd_calculus: needs a function with Fourier data (gaussian)");
    const SpectralFunction f = make_function(c);
    const CacheSettings cs = cache_settings(c);
    const std::vector<PerN> per_n = decompose_all(c, cs);

    ResultBundle b;
    b.metadata = base_metadata(c);
    record_cache(per_n, b.metadata);

    for (const auto& p : per_n) {
        const FuzzyTorusTriple t = dirac_fuzzy(p.n);
        DiracCalculus calc(t.dirac, p.decomposition);
        FourierCertificate cert;
        const ComplexMatrix via_eig = calc.apply_eig(f);
        ComplexMatrix via_fourier = calc.apply_fourier(f, c.calculus_eps, &cert);
        via_fourier -= via_eig;
        CalculusRow row;
        row.n = p.n;
        row.width = c.width;
        row.eps = c.calculus_eps;
        row.route_delta = operator_norm(via_fourier);
        row.cutoff = cert.cutoff;
        row.tail_bound = cert.tail_bound;
        row.quadrature_error = cert.quadrature_error;
        row.evaluations = cert.evaluations;
        b.calculus.push_back(row);
    }
    finish(b, c);
    return b;
}

ResultBundle cmd_mk(const RunConfig& c) {
    validate_config(c);
    ResultBundle b;
    b.metadata = base_metadata(c);

    for (std::size_t n : c.n_list) {
        if (n > 8) {
            b.metadata.cache_events.push_back("n=" + std::to_string(n) +
                                              ": skipped (mk solver is limited to n <= 8)");
            continue;
        }
        const FuzzyTorusTriple t = dirac_fuzzy(n);
        std::vector<std::pair<std::string, DensityState>> states;
        states.emplace_back("e0", DensityState::vector_state(n, 0));
        if (n >= 2) states.emplace_back("e1", DensityState::vector_state(n, 1));
        states.emplace_back("mixed", DensityState::maximally_mixed(n));

        for (std::size_t i = 0; i < states.size(); ++i)
            for (std::size_t j = i + 1; j < states.size(); ++j) {
                const MKResult r = mk_distance(t, states[i].second, states[j].second, c.mk);
                MKRow row;
                row.n = n;
                row.state_a = states[i].first;
                row.state_b = states[j].first;
                row.null_tol = c.mk.null_tol;
                row.lower_bound = r.unbounded_direction_detected ? -1.0 : r.lower_bound;
                row.estimate = r.unbounded_direction_detected ? -1.0 : r.estimate;
                row.iterations = r.iterations;
                row.converged = r.converged;
                row.unbounded = r.unbounded_direction_detected;
                row.witness.reserve(2 * n * n);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t bcol = 0; bcol < n; ++bcol) {
                        row.witness.push_back(r.witness(a, bcol).real());
                        row.witness.push_back(r.witness(a, bcol).imag());
                    }
                if (n <= 3) {
                    row.oracle = mk_bruteforce_oracle(t, states[i].second, states[j].second,
                                                      c.oracle_samples, c.oracle_seed);
                    row.oracle_delta = std::abs(row.lower_bound - row.oracle);
                }
                b.mk.push_back(row);
            }
    }
    finish(b, c);
    return b;
}

}  // namespace ncg
