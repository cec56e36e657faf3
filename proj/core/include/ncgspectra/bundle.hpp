#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ncgspectra/spectral_analysis.hpp"

namespace ncg {

struct BundleMetadata {
    int schema_version = 1;
    std::string tool_version;
    std::string timestamp;  // empty unless timestamps were requested
    std::string closed_form_convention;
    std::uint64_t convention_hash = 0;
    std::uint64_t seed = 0;
    bool cache_hit_all = false;
    std::vector<std::string> cache_events;

    friend bool operator==(const BundleMetadata&, const BundleMetadata&) = default;
};

struct SpectrumSummary {
    std::size_t n = 0;
    double cluster_tol = 0.0;
    double op_norm = 0.0;
    double closed_form_linf = -1.0;  // -1 when the closed form does not apply
    std::size_t discarded_branches = 0;

    friend bool operator==(const SpectrumSummary&, const SpectrumSummary&) = default;
};

struct SpectrumRow {
    std::size_t n = 0;
    double cluster_tol = 0.0;
    int index = 0;
    double value = 0.0;
    std::size_t multiplicity = 0;

    friend bool operator==(const SpectrumRow&, const SpectrumRow&) = default;
};

struct HausdorffRow {
    std::size_t n = 0;
    double window_radius = 0.0;
    double cluster_tol = 0.0;
    double distance = 0.0;

    friend bool operator==(const HausdorffRow&, const HausdorffRow&) = default;
};

struct ActionRow {
    std::size_t n = 0;
    std::string kind;
    double width = 0.0;
    double scale = 0.0;
    double trace = 0.0;

    friend bool operator==(const ActionRow&, const ActionRow&) = default;
};

struct ActionDiffRow {
    double scale = 0.0;
    std::size_t n_from = 0;
    std::size_t n_to = 0;
    double abs_difference = 0.0;

    friend bool operator==(const ActionDiffRow&, const ActionDiffRow&) = default;
};

struct CalculusRow {
    std::size_t n = 0;
    double width = 0.0;
    double eps = 0.0;
    double route_delta = 0.0;
    double cutoff = 0.0;
    double tail_bound = 0.0;
    double quadrature_error = 0.0;
    std::uint64_t evaluations = 0;

    friend bool operator==(const CalculusRow&, const CalculusRow&) = default;
};

// Rows flagged unbounded carry -1 sentinels in lower_bound and estimate so
// the JSON stays free of non-finite values.
struct MKRow {
    std::size_t n = 0;
    std::string state_a;
    std::string state_b;
    double null_tol = 0.0;
    double lower_bound = 0.0;
    double estimate = 0.0;
    double oracle = -1.0;        // -1 when the oracle does not apply (n > 3)
    double oracle_delta = -1.0;
    std::uint64_t iterations = 0;
    bool converged = false;
    bool unbounded = false;
    std::vector<double> witness;  // re,im pairs, row-major

    friend bool operator==(const MKRow&, const MKRow&) = default;
};

struct ResultBundle {
    BundleMetadata metadata;
    std::vector<SpectrumSummary> spectrum_summaries;
    std::vector<SpectrumRow> spectra;
    TrackingReport tracking;
    std::vector<MultiplicityVerdictRow> multiplicity;
    std::vector<HausdorffRow> hausdorff;
    std::vector<ActionRow> action;
    std::vector<ActionDiffRow> action_differences;
    std::vector<CalculusRow> calculus;
    std::vector<MKRow> mk;

    friend bool operator==(const ResultBundle&, const ResultBundle&) = default;
};

// JSON with sorted keys; doubles survive the round trip exactly, so
// parse_bundle(serialize_bundle(b)) == b.
std::string serialize_bundle(const ResultBundle& b);
ResultBundle parse_bundle(const std::string& json_text);

// bundle.json plus one CSV per nonempty table (header row, %.12g floats).
// Returns the paths written.
std::vector<std::filesystem::path> write_bundle(const ResultBundle& b,
                                                const std::filesystem::path& out_dir);

std::string csv_format(double x);

}  // namespace ncg
