#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncgspectra/bundle.hpp"
#include "ncgspectra/quantum_metric.hpp"

namespace ncg {

struct RunConfig {
    std::vector<std::size_t> n_list = {2, 3, 4};  // nonempty, ascending
    double window_radius = 3.0;
    double cluster_tol = 0.0;        // 0 selects default_cluster_tol per n
    std::size_t limit_index_max = 32;

    std::string function_kind = "gaussian";  // gaussian | bump
    double width = 1.0;
    double center = 0.0;
    double radius = 0.5;
    std::vector<double> scales = {1.0};
    double calculus_eps = 1e-6;

    MKConfig mk;
    std::size_t oracle_samples = 2000;
    std::uint64_t oracle_seed = 1;

    std::string output_dir = "out";
    bool cache_enabled = true;
    std::string cache_dir;           // empty resolves to output_dir/cache
    bool emit_timestamps = false;
    bool write_files = true;
};

void validate_config(const RunConfig& c);

// Per-n spectra with closed-form reconciliation, windowed Hausdorff distances
// against the limit spectrum, index tracking, and multiplicity verdicts.
ResultBundle cmd_spectrum(const RunConfig& c);

// Trace(f(D_n / S)) table over (n, scale) with successive differences per
// scale.
ResultBundle cmd_action(const RunConfig& c);

// Per-n operator-norm delta between the eigendecomposition and Fourier
// calculus routes at the certified eps.
ResultBundle cmd_calculus(const RunConfig& c);

// Distance table over the configured states (basis vector states and the
// maximally mixed state) with oracle cross-checks at n <= 3. Solver runs are
// limited to n <= 8.
ResultBundle cmd_mk(const RunConfig& c);

}  // namespace ncg
