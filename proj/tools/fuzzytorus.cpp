#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ncgspectra/commands.hpp"
#include "ncgspectra/verify.hpp"

namespace {
// Folds INI sections back into dotted option names, so [function] width=...
// reaches --function.width instead of being routed to a subcommand scope.
class DottedConfig : public CLI::ConfigBase {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigBase::from_config(input);
        for (auto& item : items) {
            if (item.parents.empty()) continue;
            std::string name;
            for (const auto& p : item.parents) name += p + ".";
            item.name = name + item.name;
            item.parents.clear();
        }
        return items;
    }
};

void print_spectrum_summary(const ncg::ResultBundle& b) {
    for (const auto& s : b.spectrum_summaries) {
        std::printf("n=%zu  op_norm=%.6g  cluster_tol=%.3g", s.n, s.op_norm, s.cluster_tol);
        if (s.closed_form_linf >= 0.0)
            std::printf("  closed_form_linf=%.3g  discarded=%zu", s.closed_form_linf,
                        s.discarded_branches);
        std::printf("\n");
    }
    for (const auto& h : b.hausdorff)
        std::printf("n=%zu  hausdorff(R=%g)=%.6g\n", h.n, h.window_radius, h.distance);
    for (const auto& w : b.tracking.warnings) std::printf("tracking warning: %s\n", w.c_str());
    if (b.tracking.index_shift_suggested)
        std::printf("tracking: uniform index shift %+d fits the final spectrum better\n",
                    b.tracking.suggested_shift);
}

void print_action_summary(const ncg::ResultBundle& b) {
    for (const auto& a : b.action)
        std::printf("n=%zu  S=%g  trace=%.12g\n", a.n, a.scale, a.trace);
    for (const auto& d : b.action_differences)
        std::printf("S=%g  |T(%zu)-T(%zu)|=%.6g\n", d.scale, d.n_to, d.n_from, d.abs_difference);
}

void print_calculus_summary(const ncg::ResultBundle& b) {
    for (const auto& c : b.calculus)
        std::printf("n=%zu  width=%g  eps=%.3g  route_delta=%.3g  cutoff=%.4g  evals=%llu\n", c.n,
                    c.width, c.eps, c.route_delta, c.cutoff,
                    static_cast<unsigned long long>(c.evaluations));
}

void print_mk_summary(const ncg::ResultBundle& b) {
    for (const auto& m : b.mk) {
        std::printf("n=%zu  d(%s,%s): lower=%.8g estimate=%.8g", m.n, m.state_a.c_str(),
                    m.state_b.c_str(), m.lower_bound, m.estimate);
        if (m.oracle >= 0.0) std::printf("  oracle=%.8g delta=%.2g", m.oracle, m.oracle_delta);
        if (m.unbounded) std::printf("  UNBOUNDED-DIRECTION");
        std::printf("\n");
    }
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzy torus spectral triples: spectra, calculus, and distances"};
    app.set_config("--config", "", "config file (key=value, sections per dotted prefix)");
    app.config_formatter(std::make_shared<DottedConfig>());

    ncg::RunConfig cfg;
    app.add_option("--run.n-list", cfg.n_list, "matrix sizes, ascending")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--run.window-radius", cfg.window_radius, "window |lambda| <= R")
        ->capture_default_str();
    app.add_option("--run.cluster-tol", cfg.cluster_tol,
                   "cluster tolerance; 0 selects 1e-6*max(1,||D||)")
        ->capture_default_str();
    app.add_option("--run.limit-index-max", cfg.limit_index_max, "limit spectrum index cap")
        ->capture_default_str();
    app.add_option("--function.kind", cfg.function_kind, "gaussian | bump")
        ->capture_default_str();
    app.add_option("--function.width", cfg.width, "gaussian width")->capture_default_str();
    app.add_option("--function.center", cfg.center, "bump center")->capture_default_str();
    app.add_option("--function.radius", cfg.radius, "bump radius")->capture_default_str();
    app.add_option("--action.scales", cfg.scales, "scales S for Trace f(D/S)")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--calculus.eps", cfg.calculus_eps, "certified route tolerance")
        ->capture_default_str();
    app.add_option("--mk.restarts", cfg.mk.restarts, "subgradient restarts")
        ->capture_default_str();
    app.add_option("--mk.iterations", cfg.mk.iterations, "ascent iterations per restart")
        ->capture_default_str();
    app.add_option("--mk.step-c", cfg.mk.step_c, "step schedule c/sqrt(k)")
        ->capture_default_str();
    app.add_option("--mk.seed", cfg.mk.seed, "solver seed")->capture_default_str();
    app.add_option("--mk.null-tol", cfg.mk.null_tol, "Lip-null detection tolerance")
        ->capture_default_str();
    app.add_option("--mk.oracle-samples", cfg.oracle_samples, "oracle sphere samples")
        ->capture_default_str();
    app.add_option("--mk.oracle-seed", cfg.oracle_seed, "oracle seed")->capture_default_str();
    app.add_option("--io.output-dir", cfg.output_dir, "bundle and CSV directory")
        ->capture_default_str();
    app.add_flag("--io.cache,!--io.no-cache", cfg.cache_enabled, "eigendecomposition cache")
        ->capture_default_str();
    app.add_option("--io.cache-dir", cfg.cache_dir,
                   "cache directory (default output-dir/cache; NCGSPECTRA_CACHE_DIR overrides)")
        ->capture_default_str();
    app.add_flag("--io.timestamps", cfg.emit_timestamps,
                 "wall-clock timestamps in bundle metadata (breaks byte-stability)")
        ->capture_default_str();

    auto* sub_spectrum =
        app.add_subcommand("spectrum", "indexed spectra, limit comparison, index tracking");
    auto* sub_action = app.add_subcommand("action", "spectral action table Trace f(D_n/S)");
    auto* sub_calculus =
        app.add_subcommand("calculus", "eigendecomposition vs Fourier-cutoff route deltas");
    auto* sub_mk = app.add_subcommand("mk", "Monge-Kantorovich distances between states");
    auto* sub_verify = app.add_subcommand("verify", "run the acceptance suite");
    for (auto* s : {sub_spectrum, sub_action, sub_calculus, sub_mk, sub_verify}) s->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sub_verify) {
            ncg::VerifyOptions opts;
            opts.progress = &std::cout;
            const ncg::VerifyReport rep = ncg::run_acceptance(opts);
            std::printf("acceptance: %s\n", rep.all_passed ? "pass" : "FAIL");
            return rep.all_passed ? 0 : 2;
        }
        ncg::ResultBundle b;
        if (*sub_spectrum) {
            b = ncg::cmd_spectrum(cfg);
            print_spectrum_summary(b);
        } else if (*sub_action) {
            b = ncg::cmd_action(cfg);
            print_action_summary(b);
        } else if (*sub_calculus) {
            b = ncg::cmd_calculus(cfg);
            print_calculus_summary(b);
        } else if (*sub_mk) {
            b = ncg::cmd_mk(cfg);
            print_mk_summary(b);
        }
        for (const auto& ev : b.metadata.cache_events)
            if (ev.find("rebuilt") != std::string::npos)
                std::fprintf(stderr, "warning: %s\n", ev.c_str());
        std::printf("wrote %s/bundle.json\n", cfg.output_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
