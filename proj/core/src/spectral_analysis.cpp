#include "ncgspectra/spectral_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncg {

int IndexedSpectrum::min_index() const {
    if (!index_offset) throw std::logic_error("IndexedSpectrum: index offset not assigned");
    return -static_cast<int>(*index_offset);
}

int IndexedSpectrum::max_index() const {
    if (!index_offset) throw std::logic_error("IndexedSpectrum: index offset not assigned");
    return static_cast<int>(clusters.size()) - 1 - static_cast<int>(*index_offset);
}

bool IndexedSpectrum::has_index(int j) const {
    if (!index_offset) return false;
    const long p = static_cast<long>(j) + static_cast<long>(*index_offset);
    return p >= 0 && p < static_cast<long>(clusters.size());
}

const Cluster& IndexedSpectrum::at_index(int j) const {
    if (!has_index(j)) throw std::out_of_range("IndexedSpectrum: index out of range");
    return clusters[static_cast<std::size_t>(j + static_cast<int>(*index_offset))];
}

std::vector<double> IndexedSpectrum::values() const {
    std::vector<double> v;
    v.reserve(clusters.size());
    for (const auto& c : clusters) v.push_back(c.value);
    return v;
}

double default_cluster_tol(double op_norm) { return 1e-6 * std::max(1.0, op_norm); }

IndexedSpectrum cluster_multiplicities(const std::vector<double>& ev, double tol) {
    if (ev.empty()) throw std::invalid_argument("cluster_multiplicities: empty input");
    if (!(tol > 0.0)) throw std::invalid_argument("cluster_multiplicities: tol must be positive");
    if (!std::is_sorted(ev.begin(), ev.end()))
        throw std::invalid_argument("cluster_multiplicities: eigenvalues must be ascending");

    IndexedSpectrum s;
    s.cluster_tol = tol;
    double sum = ev[0];
    std::size_t count = 1;
    for (std::size_t i = 1; i < ev.size(); ++i) {
        const double mean = sum / static_cast<double>(count);
        if (std::abs(ev[i] - mean) <= tol) {
            sum += ev[i];
            ++count;
        } else {
            s.clusters.push_back({mean, count});
            sum = ev[i];
            count = 1;
        }
    }
    s.clusters.push_back({sum / static_cast<double>(count), count});
    return s;
}

IndexedSpectrum index_spectrum(IndexedSpectrum s) {
    auto it = std::find_if(s.clusters.begin(), s.clusters.end(),
                           [](const Cluster& c) { return c.value >= 0.0; });
    if (it == s.clusters.end())
        throw std::invalid_argument(
            "index_spectrum: every cluster is negative; apply the scheme to the negated operator");
    s.index_offset = static_cast<std::size_t>(it - s.clusters.begin());
    return s;
}

double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty set");
    auto directed = [](const std::vector<double>& x, const std::vector<double>& y) {
        double worst = 0.0;
        for (double xv : x) {
            double best = std::numeric_limits<double>::infinity();
            for (double yv : y) best = std::min(best, std::abs(xv - yv));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

std::vector<double> windowed_spectrum(const IndexedSpectrum& s, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("windowed_spectrum: radius must be positive");
    std::vector<double> out;
    for (const auto& c : s.clusters)
        if (std::abs(c.value) <= radius) out.push_back(c.value);
    return out;
}

TrackingReport track_sequence(const std::vector<IndexedSpectrum>& spectra,
                              const std::map<int, double>& gap_floor) {
    if (spectra.size() < 2)
        throw std::invalid_argument("track_sequence: need at least two spectra");
    for (const auto& s : spectra)
        if (!s.index_offset)
            throw std::invalid_argument("track_sequence: spectra must be indexed (index_spectrum)");

    TrackingReport rep;
    const IndexedSpectrum& last = spectra.back();

    int lo = spectra[0].min_index(), hi = spectra[0].max_index();
    for (const auto& s : spectra) {
        lo = std::min(lo, s.min_index());
        hi = std::max(hi, s.max_index());
    }
    bool uniform_ranges = true;
    for (const auto& s : spectra)
        if (s.min_index() != spectra[0].min_index() || s.max_index() != spectra[0].max_index())
            uniform_ranges = false;
    if (!uniform_ranges)
        rep.warnings.push_back(
            "index ranges differ across spectra; tracks cover the union with per-index presence flags");

    for (int j = lo; j <= hi; ++j) {
        IndexTrack tr;
        tr.index = j;
        tr.present_in_all = true;
        for (const auto& s : spectra) {
            if (s.has_index(j)) {
                tr.values.push_back(s.at_index(j).value);
                tr.multiplicities.push_back(s.at_index(j).multiplicity);
            } else {
                tr.present_in_all = false;
            }
        }
        if (tr.values.empty()) continue;
        tr.limit_candidate = tr.values.back();
        for (double v : tr.values) tr.deviations.push_back(std::abs(v - tr.limit_candidate));
        tr.deviations_decreasing = tr.deviations.size() >= 2;
        for (std::size_t i = 0; i + 2 < tr.deviations.size(); ++i)
            if (!(tr.deviations[i] > tr.deviations[i + 1])) tr.deviations_decreasing = false;
        rep.tracks.push_back(std::move(tr));
    }

    // alternative-branch detection: a uniform one-index offset of the earlier
    // spectra against the final one, compared by total misfit over shared
    // indices
    auto misfit = [&](int off) {
        double total = 0.0;
        std::size_t used = 0;
        for (std::size_t i = 0; i + 1 < spectra.size(); ++i) {
            for (int j = lo; j <= hi; ++j) {
                if (!spectra[i].has_index(j + off) || !last.has_index(j)) continue;
                total += std::abs(spectra[i].at_index(j + off).value - last.at_index(j).value);
                ++used;
            }
        }
        return used ? total / static_cast<double>(used)
                    : std::numeric_limits<double>::infinity();
    };
    const double m0 = misfit(0), mp = misfit(+1), mm = misfit(-1);
    if (mp < m0 || mm < m0) {
        rep.index_shift_suggested = true;
        rep.suggested_shift = (mp <= mm) ? +1 : -1;
        rep.warnings.push_back("a uniform one-index shift fits the final spectrum better; "
                               "0 may be entering or leaving the limit spectrum");
    }

    for (const auto& [j, floor] : gap_floor) {
        bool held = true;
        for (const auto& s : spectra) {
            if (!s.has_index(j) || !s.has_index(j + 1)) {
                held = false;
                break;
            }
            if (s.at_index(j + 1).value - s.at_index(j).value < floor) held = false;
        }
        rep.gap_floor_indices.push_back(j);
        rep.gap_floor_held.push_back(held);
    }
    return rep;
}

std::string to_string(MultiplicityVerdict v) {
    switch (v) {
        case MultiplicityVerdict::kConsistentWithLiminf: return "consistent-with-liminf";
        case MultiplicityVerdict::kEqual: return "equal";
        case MultiplicityVerdict::kViolated: return "violated";
    }
    return "unknown";
}

std::vector<MultiplicityVerdictRow> multiplicity_convergence(const TrackingReport& report,
                                                             const IndexedSpectrum& limit) {
    std::vector<MultiplicityVerdictRow> rows;
    for (const auto& tr : report.tracks) {
        MultiplicityVerdictRow row;
        row.index = tr.index;
        if (tr.multiplicities.empty()) continue;
        row.eventual = tr.multiplicities.back();
        row.tail_length = 1;
        for (std::size_t i = tr.multiplicities.size() - 1; i-- > 0;) {
            if (tr.multiplicities[i] == row.eventual)
                ++row.tail_length;
            else
                break;
        }
        row.limit_cluster_found = limit.has_index(tr.index);
        if (row.limit_cluster_found) {
            row.limit_multiplicity = limit.at_index(tr.index).multiplicity;
            if (row.eventual == row.limit_multiplicity)
                row.verdict = MultiplicityVerdict::kEqual;
            else if (row.eventual > row.limit_multiplicity)
                row.verdict = MultiplicityVerdict::kConsistentWithLiminf;
            else
                row.verdict = MultiplicityVerdict::kViolated;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ncg
