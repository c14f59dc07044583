// Python bindings for the main pipeline operations. Inputs and outputs use
// plain Python types (dicts, lists, numbers) so the module has no hard
// dependency on numpy or dataclasses.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mosaiclink/dedup.hpp"
#include "mosaiclink/errors.hpp"
#include "mosaiclink/fusion.hpp"
#include "mosaiclink/image.hpp"
#include "mosaiclink/linkage.hpp"
#include "mosaiclink/manifest.hpp"
#include "mosaiclink/pipeline.hpp"
#include "mosaiclink/report.hpp"
#include "mosaiclink/username.hpp"
#include "mosaiclink/wordlists.hpp"

namespace py = pybind11;

namespace {

mosaiclink::GrayImage grid_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw py::value_error("pixel grid must be non-empty");
    }
    mosaiclink::GrayImage img;
    img.height = static_cast<int>(rows.size());
    img.width = static_cast<int>(rows.front().size());
    img.pixels.reserve(static_cast<std::size_t>(img.width) * img.height);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != img.width) {
            throw py::value_error("pixel grid rows must all have the same length");
        }
        img.pixels.insert(img.pixels.end(), row.begin(), row.end());
    }
    return img;
}

mosaiclink::DistanceMetric metric_from_string(const std::string& name) {
    if (name == "euclidean") return mosaiclink::DistanceMetric::euclidean;
    if (name == "cosine") return mosaiclink::DistanceMetric::cosine;
    throw py::value_error("metric must be 'euclidean' or 'cosine'");
}

mosaiclink::WordToken token_from_dict(const py::dict& d) {
    mosaiclink::WordToken t;
    t.text = d["text"].cast<std::string>();
    t.box = {d["x"].cast<double>(), d["y"].cast<double>(),
             d["w"].cast<double>(), d["h"].cast<double>()};
    if (d.contains("confidence") && !d["confidence"].is_none()) {
        t.confidence = d["confidence"].cast<double>();
    }
    return t;
}

py::dict report_to_dict(const mosaiclink::StatisticsReport& r) {
    py::dict graph;
    graph["component_count"] = r.graph.component_count;
    graph["mean_nodes"] = r.graph.mean_nodes;
    graph["mean_edges"] = r.graph.mean_edges;
    graph["largest_nodes"] = r.graph.largest_nodes;
    graph["largest_edges"] = r.graph.largest_edges;

    py::dict out;
    out["images_ingested"] = r.images_ingested;
    out["images_kept_after_dedup"] = r.images_kept_after_dedup;
    out["mean_participants_per_collage"] = r.mean_participants_per_collage;
    out["total_faces"] = r.total_faces;
    out["age_mean"] = r.age_mean;
    out["age_median"] = r.age_median;
    out["age_category_shares"] = r.age_category_shares;
    out["gender_counts"] = r.gender_counts;
    out["username_word_count_histogram"] = r.username_word_count_histogram;
    out["distinct_usernames"] = r.distinct_usernames;
    out["multiword_usernames"] = r.multiword_usernames;
    out["reused_usernames"] = r.reused_usernames;
    out["repeated_face_identities"] = r.repeated_face_identities;
    out["graph"] = graph;
    return out;
}

py::list clusters_to_list(const std::vector<mosaiclink::IdentityCluster>& clusters) {
    py::list out;
    for (const auto& c : clusters) {
        py::dict entry;
        entry["identity_id"] = c.identity_id;
        entry["members"] = std::vector<std::string>(c.members.begin(), c.members.end());
        entry["meetings"] = std::vector<std::string>(c.meetings.begin(), c.meetings.end());
        entry["canonical_username"] =
            c.canonical_username ? py::cast(*c.canonical_username) : py::none();
        out.append(std::move(entry));
    }
    return out;
}

std::uint64_t compute_dhash_py(const std::vector<std::vector<double>>& rows) {
    return mosaiclink::compute_dhash(grid_from_rows(rows)).bits;
}

int hamming_distance_py(std::uint64_t a, std::uint64_t b) {
    return mosaiclink::hamming_distance(mosaiclink::Hash64{a}, mosaiclink::Hash64{b});
}

double embedding_pair_distance_py(const std::vector<double>& e1,
                                  const std::vector<double>& e2,
                                  const std::string& metric) {
    return mosaiclink::embedding_pair_distance(e1, e2, metric_from_string(metric));
}

py::list merge_word_tokens_py(const py::list& tokens, double threshold) {
    std::vector<mosaiclink::WordToken> native;
    for (const auto& item : tokens) {
        native.push_back(token_from_dict(item.cast<py::dict>()));
    }
    py::list out;
    for (const auto& c : mosaiclink::merge_word_tokens(native, threshold)) {
        py::dict entry;
        entry["text"] = c.text;
        entry["x"] = c.box.x;
        entry["y"] = c.box.y;
        entry["w"] = c.box.w;
        entry["h"] = c.box.h;
        entry["word_count"] = c.word_count;
        out.append(std::move(entry));
    }
    return out;
}

py::tuple normalize_username_py(const std::string& raw,
                                std::optional<std::vector<std::string>> generic_names) {
    std::set<std::string> names;
    if (generic_names) {
        names.insert(generic_names->begin(), generic_names->end());
    } else {
        names = mosaiclink::default_generic_names();
    }
    auto n = mosaiclink::normalize_username(raw, names);
    return py::make_tuple(n.text, n.generic);
}

std::string bin_age_py(double years) {
    return mosaiclink::to_string(mosaiclink::bin_age(years));
}

std::optional<double> aggregate_age_py(const std::vector<double>& estimates) {
    return mosaiclink::aggregate_age(estimates);
}

py::list link_identities_py(const py::list& participants, double face_threshold,
                            bool use_username, bool use_face, bool exclude_generic) {
    std::vector<mosaiclink::Participant> native;
    for (const auto& item : participants) {
        py::dict d = item.cast<py::dict>();
        mosaiclink::Participant p;
        p.participant_id = d["participant_id"].cast<std::string>();
        p.meeting_id = d["meeting_id"].cast<std::string>();
        if (d.contains("username") && !d["username"].is_none()) {
            p.username = d["username"].cast<std::string>();
        }
        if (d.contains("generic")) p.username_generic = d["generic"].cast<bool>();
        if (d.contains("embedding") && !d["embedding"].is_none()) {
            p.embedding = d["embedding"].cast<mosaiclink::Embedding>();
        }
        native.push_back(std::move(p));
    }
    return clusters_to_list(mosaiclink::link_identities(
        native, face_threshold, use_username, use_face, exclude_generic));
}

py::list ingest_manifest_py(const std::string& path) {
    py::list out;
    for (const auto& post : mosaiclink::ingest_manifest(path)) {
        py::dict entry;
        entry["post_id"] = post.post_id;
        entry["source"] = mosaiclink::to_string(post.source);
        entry["image_path"] = post.image_path;
        entry["tags"] = post.tags;
        out.append(std::move(entry));
    }
    return out;
}

py::dict run_pipeline_py(const std::string& manifest, const std::string& output_dir,
                         const std::string& backend, double hamming_threshold,
                         double cosine_threshold, double euclidean_threshold,
                         const std::string& embedding_combine,
                         double word_merge_threshold, double face_link_threshold,
                         double collage_score_threshold, const std::string& stages,
                         int jobs, std::optional<std::string> ui_words_file,
                         std::optional<std::string> dictionary_file,
                         std::optional<std::string> generic_names_file) {
    mosaiclink::PipelineConfig config;
    config.manifest_path = manifest;
    config.output_dir = output_dir;
    config.backend = backend;
    config.dedup.hamming_threshold = hamming_threshold;
    config.dedup.cosine_threshold = cosine_threshold;
    config.dedup.euclidean_threshold = euclidean_threshold;
    if (embedding_combine == "both_required" || embedding_combine == "both") {
        config.dedup.embedding_combine = mosaiclink::EmbeddingCombine::both_required;
    } else if (embedding_combine == "either_suffices" || embedding_combine == "either") {
        config.dedup.embedding_combine = mosaiclink::EmbeddingCombine::either_suffices;
    } else {
        throw py::value_error("embedding_combine must be 'both_required' or 'either_suffices'");
    }
    config.word_merge_threshold = word_merge_threshold;
    config.face_link_threshold = face_link_threshold;
    config.collage_score_threshold = collage_score_threshold;
    config.stages = mosaiclink::parse_stage_set(stages);
    config.jobs = jobs;
    if (ui_words_file) config.ui_words = mosaiclink::load_word_list(*ui_words_file);
    if (dictionary_file) config.dictionary = mosaiclink::load_word_list(*dictionary_file);
    if (generic_names_file) {
        config.generic_names = mosaiclink::load_word_list(*generic_names_file);
    }

    mosaiclink::PipelineResult result;
    {
        py::gil_scoped_release release;
        result = mosaiclink::run_pipeline(config);
    }

    py::list removed;
    for (const auto& r : result.dedup.removed) {
        py::dict entry;
        entry["image_id"] = r.image_id;
        entry["kept_id"] = r.kept_id;
        entry["reason"] = mosaiclink::to_string(r.reason);
        removed.append(std::move(entry));
    }
    py::list skipped;
    for (const auto& s : result.skipped) {
        py::dict entry;
        entry["image_id"] = s.image_id;
        entry["reason"] = s.reason;
        skipped.append(std::move(entry));
    }

    py::dict out;
    out["report"] = report_to_dict(result.report);
    out["kept"] = result.dedup.kept;
    out["removed"] = std::move(removed);
    out["filtered_before_dedup"] = result.filtered_before_dedup;
    out["clusters"] = clusters_to_list(result.clusters);
    out["warnings"] = result.warnings;
    out["skipped"] = std::move(skipped);
    out["output_dir"] = output_dir;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Video-conference collage analysis: hashing, dedup, fusion, "
              "username reconstruction, identity linkage, and the full pipeline.";
    m.attr("__version__") = "0.1.0";
    m.attr("FACE_EMBEDDING_DIM") = static_cast<int>(mosaiclink::kFaceEmbeddingDim);

    auto base = py::register_exception<mosaiclink::Error>(m, "Error");
    py::register_exception<mosaiclink::ConfigError>(m, "ConfigError", base.ptr());

    m.def("compute_dhash", &compute_dhash_py, py::arg("pixels"),
          "64-bit difference hash of a row-major grayscale grid "
          "(list of equal-length rows of [0,255] values).");
    m.def("hamming_distance", &hamming_distance_py, py::arg("a"), py::arg("b"),
          "Number of differing bits between two 64-bit hashes.");
    m.def("embedding_pair_distance", &embedding_pair_distance_py, py::arg("e1"),
          py::arg("e2"), py::arg("metric") = "euclidean",
          "Distance between two equal-length embeddings "
          "('euclidean' or 'cosine').");
    m.def("merge_word_tokens", &merge_word_tokens_py, py::arg("tokens"),
          py::arg("threshold") = 10.0,
          "Groups word tokens (dicts with text/x/y/w/h) into multi-word "
          "username candidates by corner proximity.");
    m.def("normalize_username", &normalize_username_py, py::arg("raw"),
          py::arg("generic_names") = py::none(),
          "Returns (normalized_text, is_generic). Uses the built-in device-"
          "name list when generic_names is None.");
    m.def("bin_age", &bin_age_py, py::arg("years"),
          "Age category for an age in years: child, adolescent, adult, or "
          "older_adult.");
    m.def("aggregate_age", &aggregate_age_py, py::arg("estimates"),
          "Mean of the per-detector age estimates; None for an empty list.");
    m.def("link_identities", &link_identities_py, py::arg("participants"),
          py::arg("face_threshold") = 0.3, py::arg("use_username") = true,
          py::arg("use_face") = true, py::arg("exclude_generic") = true,
          "Clusters participant dicts (participant_id, meeting_id, optional "
          "username/generic/embedding) into identities.");
    m.def("ingest_manifest", &ingest_manifest_py, py::arg("path"),
          "Parses a JSONL post manifest into a list of post dicts.");
    m.def("run_pipeline", &run_pipeline_py, py::arg("manifest"),
          py::arg("output_dir"), py::arg("backend") = "fixture",
          py::arg("hamming_threshold") = 1.2, py::arg("cosine_threshold") = 0.0035,
          py::arg("euclidean_threshold") = 25.0,
          py::arg("embedding_combine") = "both_required",
          py::arg("word_merge_threshold") = 10.0,
          py::arg("face_link_threshold") = 0.3,
          py::arg("collage_score_threshold") = 0.5,
          py::arg("stages") = "classify,dedup,fusion,username,linkage,graph",
          py::arg("jobs") = 0, py::arg("ui_words") = py::none(),
          py::arg("dictionary") = py::none(),
          py::arg("generic_names") = py::none(),
          "Runs the full pipeline over a manifest and returns the report "
          "plus per-stage outcomes; artifacts are written to output_dir.");
    m.def("supports_extended_formats", &mosaiclink::supports_extended_formats,
          "True when image formats beyond PNM decode in this build.");
}
