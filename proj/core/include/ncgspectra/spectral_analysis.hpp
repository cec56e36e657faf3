#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ncg {

struct Cluster {
    double value = 0.0;
    std::size_t multiplicity = 0;

    friend bool operator==(const Cluster&, const Cluster&) = default;
};

// Eigenvalues merged into (value, multiplicity) clusters, indexed by an
// integer interval containing 0 once index_offset is assigned: the cluster at
// list position p carries index p - index_offset, and index 0 sits at the
// smallest nonnegative cluster value.
struct IndexedSpectrum {
    std::vector<Cluster> clusters;             // strictly increasing values
    std::optional<std::size_t> index_offset;   // set by index_spectrum
    double cluster_tol = 0.0;

    int min_index() const;
    int max_index() const;
    const Cluster& at_index(int j) const;      // requires index_offset
    bool has_index(int j) const;
    std::vector<double> values() const;
};

// cluster_tol default 1e-6 * max(1, ||D||_op); pass the operator norm of the
// source matrix (or any upper bound for it).
double default_cluster_tol(double op_norm);

// Greedy left-to-right merge: an eigenvalue joins the current cluster when it
// lies within tol of the running cluster mean; cluster value = mean of its
// members. Index offset is left unassigned.
IndexedSpectrum cluster_multiplicities(const std::vector<double>& eigenvalues_ascending,
                                       double tol);

// Assigns the integer indexing with 0 at the smallest nonnegative cluster.
// Throws if every cluster is negative; the error advises applying the scheme
// to the negated operator. Idempotent.
IndexedSpectrum index_spectrum(IndexedSpectrum s);

double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b);

// Cluster values with |value| <= radius.
std::vector<double> windowed_spectrum(const IndexedSpectrum& s, double radius);

struct IndexTrack {
    int index = 0;
    std::vector<double> values;            // one per input spectrum, in order
    std::vector<std::size_t> multiplicities;
    std::vector<double> deviations;        // |value_i - limit_candidate|
    double limit_candidate = 0.0;          // last element
    bool deviations_decreasing = false;    // strict monotone decrease over the sequence
    bool present_in_all = false;

    friend bool operator==(const IndexTrack&, const IndexTrack&) = default;
};

struct TrackingReport {
    std::vector<IndexTrack> tracks;              // sorted by index
    std::vector<std::string> warnings;
    bool index_shift_suggested = false;          // uniform +-1 offset fits better
    int suggested_shift = 0;
    std::vector<int> gap_floor_indices;          // indices whose floor was checked
    std::vector<bool> gap_floor_held;            // per checked index, held at every n

    friend bool operator==(const TrackingReport&, const TrackingReport&) = default;
};

// Aligns clusters across the inputs by the integer index scheme only, never
// by nearest value. Spectra must have index offsets assigned. gap_floor, when
// present, holds per-index floors delta_j checked against
// value(j+1) - value(j) at every input spectrum. A uniform one-index offset
// that fits the final spectrum strictly better than the identity alignment is
// flagged, not applied.
TrackingReport track_sequence(const std::vector<IndexedSpectrum>& spectra,
                              const std::map<int, double>& gap_floor = {});

enum class MultiplicityVerdict { kConsistentWithLiminf, kEqual, kViolated };

struct MultiplicityVerdictRow {
    int index = 0;
    std::size_t eventual = 0;        // value of the constant tail
    std::size_t tail_length = 0;
    std::size_t limit_multiplicity = 0;
    bool limit_cluster_found = false;
    MultiplicityVerdict verdict = MultiplicityVerdict::kEqual;

    friend bool operator==(const MultiplicityVerdictRow&, const MultiplicityVerdictRow&) = default;
};

std::string to_string(MultiplicityVerdict v);

// Eventual-constancy check of each tracked multiplicity sequence against the
// limit spectrum's multiplicity at the same index. eventual > limit is
// consistent with the liminf bound; eventual == limit is equality; eventual <
// limit violates the bound. Indices absent from the limit are reported with
// limit_cluster_found = false and skipped from verdict aggregation.
std::vector<MultiplicityVerdictRow> multiplicity_convergence(const TrackingReport& report,
                                                             const IndexedSpectrum& limit);

}  // namespace ncg
