#include "ncgspectra/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ncg {

using nlohmann::json;

namespace {
json to_json(const IndexTrack& t) {
    return json{{"index", t.index},
                {"values", t.values},
                {"multiplicities", t.multiplicities},
                {"deviations", t.deviations},
                {"limit_candidate", t.limit_candidate},
                {"deviations_decreasing", t.deviations_decreasing},
                {"present_in_all", t.present_in_all}};
}

void from_json(const json& j, IndexTrack& t) {
    j.at("index").get_to(t.index);
    j.at("values").get_to(t.values);
    j.at("multiplicities").get_to(t.multiplicities);
    j.at("deviations").get_to(t.deviations);
    j.at("limit_candidate").get_to(t.limit_candidate);
    j.at("deviations_decreasing").get_to(t.deviations_decreasing);
    j.at("present_in_all").get_to(t.present_in_all);
}

json to_json(const TrackingReport& r) {
    json tracks = json::array();
    for (const auto& t : r.tracks) tracks.push_back(to_json(t));
    return json{{"tracks", tracks},
                {"warnings", r.warnings},
                {"index_shift_suggested", r.index_shift_suggested},
                {"suggested_shift", r.suggested_shift},
                {"gap_floor_indices", r.gap_floor_indices},
                {"gap_floor_held", r.gap_floor_held}};
}

void from_json(const json& j, TrackingReport& r) {
    r.tracks.clear();
    for (const auto& tj : j.at("tracks")) {
        IndexTrack t;
        from_json(tj, t);
        r.tracks.push_back(std::move(t));
    }
    j.at("warnings").get_to(r.warnings);
    j.at("index_shift_suggested").get_to(r.index_shift_suggested);
    j.at("suggested_shift").get_to(r.suggested_shift);
    j.at("gap_floor_indices").get_to(r.gap_floor_indices);
    j.at("gap_floor_held").get_to(r.gap_floor_held);
}

json to_json(const MultiplicityVerdictRow& m) {
    return json{{"index", m.index},
                {"eventual", m.eventual},
                {"tail_length", m.tail_length},
                {"limit_multiplicity", m.limit_multiplicity},
                {"limit_cluster_found", m.limit_cluster_found},
                {"verdict", to_string(m.verdict)}};
}

void from_json(const json& j, MultiplicityVerdictRow& m) {
    j.at("index").get_to(m.index);
    j.at("eventual").get_to(m.eventual);
    j.at("tail_length").get_to(m.tail_length);
    j.at("limit_multiplicity").get_to(m.limit_multiplicity);
    j.at("limit_cluster_found").get_to(m.limit_cluster_found);
    const std::string v = j.at("verdict").get<std::string>();
    if (v == to_string(MultiplicityVerdict::kConsistentWithLiminf))
        m.verdict = MultiplicityVerdict::kConsistentWithLiminf;
    else if (v == to_string(MultiplicityVerdict::kEqual))
        m.verdict = MultiplicityVerdict::kEqual;
    else if (v == to_string(MultiplicityVerdict::kViolated))
        m.verdict = MultiplicityVerdict::kViolated;
    else
        throw std::invalid_argument("parse_bundle: unknown verdict " + v);
}

json to_json(const BundleMetadata& m) {
    return json{{"schema_version", m.schema_version},
                {"tool_version", m.tool_version},
                {"timestamp", m.timestamp},
                {"closed_form_convention", m.closed_form_convention},
                {"convention_hash", m.convention_hash},
                {"seed", m.seed},
                {"cache_hit_all", m.cache_hit_all},
                {"cache_events", m.cache_events}};
}

void from_json(const json& j, BundleMetadata& m) {
    j.at("schema_version").get_to(m.schema_version);
    j.at("tool_version").get_to(m.tool_version);
    j.at("timestamp").get_to(m.timestamp);
    j.at("closed_form_convention").get_to(m.closed_form_convention);
    j.at("convention_hash").get_to(m.convention_hash);
    j.at("seed").get_to(m.seed);
    j.at("cache_hit_all").get_to(m.cache_hit_all);
    j.at("cache_events").get_to(m.cache_events);
}

json to_json(const SpectrumSummary& s) {
    return json{{"n", s.n},
                {"cluster_tol", s.cluster_tol},
                {"op_norm", s.op_norm},
                {"closed_form_linf", s.closed_form_linf},
                {"discarded_branches", s.discarded_branches}};
}

void from_json(const json& j, SpectrumSummary& s) {
    j.at("n").get_to(s.n);
    j.at("cluster_tol").get_to(s.cluster_tol);
    j.at("op_norm").get_to(s.op_norm);
    j.at("closed_form_linf").get_to(s.closed_form_linf);
    j.at("discarded_branches").get_to(s.discarded_branches);
}

json to_json(const SpectrumRow& s) {
    return json{{"n", s.n},
                {"cluster_tol", s.cluster_tol},
                {"index", s.index},
                {"value", s.value},
                {"multiplicity", s.multiplicity}};
}

void from_json(const json& j, SpectrumRow& s) {
    j.at("n").get_to(s.n);
    j.at("cluster_tol").get_to(s.cluster_tol);
    j.at("index").get_to(s.index);
    j.at("value").get_to(s.value);
    j.at("multiplicity").get_to(s.multiplicity);
}

json to_json(const HausdorffRow& h) {
    return json{{"n", h.n},
                {"window_radius", h.window_radius},
                {"cluster_tol", h.cluster_tol},
                {"distance", h.distance}};
}

void from_json(const json& j, HausdorffRow& h) {
    j.at("n").get_to(h.n);
    j.at("window_radius").get_to(h.window_radius);
    j.at("cluster_tol").get_to(h.cluster_tol);
    j.at("distance").get_to(h.distance);
}

json to_json(const ActionRow& a) {
    return json{{"n", a.n},
                {"kind", a.kind},
                {"width", a.width},
                {"scale", a.scale},
                {"trace", a.trace}};
}

void from_json(const json& j, ActionRow& a) {
    j.at("n").get_to(a.n);
    j.at("kind").get_to(a.kind);
    j.at("width").get_to(a.width);
    j.at("scale").get_to(a.scale);
    j.at("trace").get_to(a.trace);
}

json to_json(const ActionDiffRow& a) {
    return json{{"scale", a.scale},
                {"n_from", a.n_from},
                {"n_to", a.n_to},
                {"abs_difference", a.abs_difference}};
}

void from_json(const json& j, ActionDiffRow& a) {
    j.at("scale").get_to(a.scale);
    j.at("n_from").get_to(a.n_from);
    j.at("n_to").get_to(a.n_to);
    j.at("abs_difference").get_to(a.abs_difference);
}

json to_json(const CalculusRow& c) {
    return json{{"n", c.n},
                {"width", c.width},
                {"eps", c.eps},
                {"route_delta", c.route_delta},
                {"cutoff", c.cutoff},
                {"tail_bound", c.tail_bound},
                {"quadrature_error", c.quadrature_error},
                {"evaluations", c.evaluations}};
}

void from_json(const json& j, CalculusRow& c) {
    j.at("n").get_to(c.n);
    j.at("width").get_to(c.width);
    j.at("eps").get_to(c.eps);
    j.at("route_delta").get_to(c.route_delta);
    j.at("cutoff").get_to(c.cutoff);
    j.at("tail_bound").get_to(c.tail_bound);
    j.at("quadrature_error").get_to(c.quadrature_error);
    j.at("evaluations").get_to(c.evaluations);
}

json to_json(const MKRow& m) {
    return json{{"n", m.n},
                {"state_a", m.state_a},
                {"state_b", m.state_b},
                {"null_tol", m.null_tol},
                {"lower_bound", m.lower_bound},
                {"estimate", m.estimate},
                {"oracle", m.oracle},
                {"oracle_delta", m.oracle_delta},
                {"iterations", m.iterations},
                {"converged", m.converged},
                {"unbounded", m.unbounded},
                {"witness", m.witness}};
}

void from_json(const json& j, MKRow& m) {
    j.at("n").get_to(m.n);
    j.at("state_a").get_to(m.state_a);
    j.at("state_b").get_to(m.state_b);
    j.at("null_tol").get_to(m.null_tol);
    j.at("lower_bound").get_to(m.lower_bound);
    j.at("estimate").get_to(m.estimate);
    j.at("oracle").get_to(m.oracle);
    j.at("oracle_delta").get_to(m.oracle_delta);
    j.at("iterations").get_to(m.iterations);
    j.at("converged").get_to(m.converged);
    j.at("unbounded").get_to(m.unbounded);
    j.at("witness").get_to(m.witness);
}

template <typename Row>
json rows_json(const std::vector<Row>& rows) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    return arr;
}

template <typename Row>
void rows_from_json(const json& arr, std::vector<Row>& rows) {
    rows.clear();
    for (const auto& rj : arr) {
        Row r;
        from_json(rj, r);
        rows.push_back(std::move(r));
    }
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!out) throw std::runtime_error("short write to " + p.string());
}
}  // namespace

std::string csv_format(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string serialize_bundle(const ResultBundle& b) {
    json j;
    j["schema_version"] = b.metadata.schema_version;
    j["metadata"] = to_json(b.metadata);
    j["spectrum_summaries"] = rows_json(b.spectrum_summaries);
    j["spectra"] = rows_json(b.spectra);
    j["tracking"] = to_json(b.tracking);
    j["multiplicity"] = rows_json(b.multiplicity);
    j["hausdorff"] = rows_json(b.hausdorff);
    j["action"] = rows_json(b.action);
    j["action_differences"] = rows_json(b.action_differences);
    j["calculus"] = rows_json(b.calculus);
    j["mk"] = rows_json(b.mk);
    return j.dump(2) + "\n";
}

ResultBundle parse_bundle(const std::string& json_text) {
    const json j = json::parse(json_text);
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("parse_bundle: unsupported schema_version");
    ResultBundle b;
    from_json(j.at("metadata"), b.metadata);
    rows_from_json(j.at("spectrum_summaries"), b.spectrum_summaries);
    rows_from_json(j.at("spectra"), b.spectra);
    from_json(j.at("tracking"), b.tracking);
    rows_from_json(j.at("multiplicity"), b.multiplicity);
    rows_from_json(j.at("hausdorff"), b.hausdorff);
    rows_from_json(j.at("action"), b.action);
    rows_from_json(j.at("action_differences"), b.action_differences);
    rows_from_json(j.at("calculus"), b.calculus);
    rows_from_json(j.at("mk"), b.mk);
    return b;
}

std::vector<std::filesystem::path> write_bundle(const ResultBundle& b,
                                                const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::vector<std::filesystem::path> written;

    const std::filesystem::path jp = out_dir / "bundle.json";
    write_text(jp, serialize_bundle(b));
    written.push_back(jp);

    auto emit_csv = [&](const char* name, const std::string& text) {
        const std::filesystem::path p = out_dir / name;
        write_text(p, text);
        written.push_back(p);
    };

    if (!b.spectra.empty()) {
        std::string t = "n,cluster_tol,index,value,multiplicity\n";
        for (const auto& r : b.spectra)
            t += std::to_string(r.n) + "," + csv_format(r.cluster_tol) + "," +
                 std::to_string(r.index) + "," + csv_format(r.value) + "," +
                 std::to_string(r.multiplicity) + "\n";
        emit_csv("spectra.csv", t);
    }
    if (!b.spectrum_summaries.empty()) {
        std::string t = "n,cluster_tol,op_norm,closed_form_linf,discarded_branches\n";
        for (const auto& r : b.spectrum_summaries)
            t += std::to_string(r.n) + "," + csv_format(r.cluster_tol) + "," +
                 csv_format(r.op_norm) + "," + csv_format(r.closed_form_linf) + "," +
                 std::to_string(r.discarded_branches) + "\n";
        emit_csv("spectrum_summary.csv", t);
    }
    if (!b.hausdorff.empty()) {
        std::string t = "n,window_radius,cluster_tol,distance\n";
        for (const auto& r : b.hausdorff)
            t += std::to_string(r.n) + "," + csv_format(r.window_radius) + "," +
                 csv_format(r.cluster_tol) + "," + csv_format(r.distance) + "\n";
        emit_csv("hausdorff.csv", t);
    }
    if (!b.tracking.tracks.empty()) {
        std::string t = "index,seq_pos,value,multiplicity,deviation,limit_candidate\n";
        for (const auto& tr : b.tracking.tracks)
            for (std::size_t i = 0; i < tr.values.size(); ++i)
                t += std::to_string(tr.index) + "," + std::to_string(i) + "," +
                     csv_format(tr.values[i]) + "," + std::to_string(tr.multiplicities[i]) + "," +
                     csv_format(i < tr.deviations.size() ? tr.deviations[i] : 0.0) + "," +
                     csv_format(tr.limit_candidate) + "\n";
        emit_csv("tracking.csv", t);
    }
    if (!b.action.empty()) {
        std::string t = "n,kind,width,scale,trace\n";
        for (const auto& r : b.action)
            t += std::to_string(r.n) + "," + r.kind + "," + csv_format(r.width) + "," +
                 csv_format(r.scale) + "," + csv_format(r.trace) + "\n";
        emit_csv("action.csv", t);
    }
    if (!b.action_differences.empty()) {
        std::string t = "scale,n_from,n_to,abs_difference\n";
        for (const auto& r : b.action_differences)
            t += csv_format(r.scale) + "," + std::to_string(r.n_from) + "," +
                 std::to_string(r.n_to) + "," + csv_format(r.abs_difference) + "\n";
        emit_csv("action_diff.csv", t);
    }
    if (!b.calculus.empty()) {
        std::string t = "n,width,eps,route_delta,cutoff,tail_bound,quadrature_error,evaluations\n";
        for (const auto& r : b.calculus)
            t += std::to_string(r.n) + "," + csv_format(r.width) + "," + csv_format(r.eps) + "," +
                 csv_format(r.route_delta) + "," + csv_format(r.cutoff) + "," +
                 csv_format(r.tail_bound) + "," + csv_format(r.quadrature_error) + "," +
                 std::to_string(r.evaluations) + "\n";
        emit_csv("calculus.csv", t);
    }
    if (!b.mk.empty()) {
        std::string t = "n,state_a,state_b,null_tol,lower_bound,estimate,oracle,oracle_delta,"
                        "iterations,converged,unbounded\n";
        for (const auto& r : b.mk)
            t += std::to_string(r.n) + "," + r.state_a + "," + r.state_b + "," +
                 csv_format(r.null_tol) + "," + csv_format(r.lower_bound) + "," +
                 csv_format(r.estimate) + "," + csv_format(r.oracle) + "," +
                 csv_format(r.oracle_delta) + "," + std::to_string(r.iterations) + "," +
                 (r.converged ? "1" : "0") + "," + (r.unbounded ? "1" : "0") + "\n";
        emit_csv("mk.csv", t);
    }
    return written;
}

}  // namespace ncg
