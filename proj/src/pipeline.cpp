#include "mosaiclink/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mosaiclink/backend.hpp"
#include "mosaiclink/errors.hpp"
#include "mosaiclink/fusion.hpp"
#include "mosaiclink/image.hpp"
#include "mosaiclink/manifest.hpp"
#include "mosaiclink/username.hpp"

namespace mosaiclink {

namespace fs = std::filesystem;
using nlohmann::json;

StageSet parse_stage_set(const std::string& names) {
    StageSet stages{false, false, false, false, false, false};
    std::stringstream in(names);
    std::string name;
    while (std::getline(in, name, ',')) {
        if (name == "classify") stages.classify = true;
        else if (name == "dedup") stages.dedup = true;
        else if (name == "fusion") stages.fusion = true;
        else if (name == "username") stages.username = true;
        else if (name == "linkage") stages.linkage = true;
        else if (name == "graph") stages.graph = true;
        else if (!name.empty()) {
            throw ConfigError("unknown stage \"" + name +
                              "\" (stages: classify, dedup, fusion, username, linkage, graph)");
        }
    }
    return stages;
}

void PipelineConfig::validate() const {
    const auto non_negative = [](double v, const char* name) {
        if (v < 0.0) {
            throw ConfigError(std::string(name) + " must be non-negative");
        }
    };
    non_negative(dedup.hamming_threshold, "hamming threshold");
    non_negative(dedup.cosine_threshold, "cosine threshold");
    non_negative(dedup.euclidean_threshold, "euclidean threshold");
    non_negative(word_merge_threshold, "word merge threshold");
    non_negative(face_link_threshold, "face link threshold");
    non_negative(collage_score_threshold, "collage score threshold");
    if (jobs < 0) throw ConfigError("job count must be non-negative");
    if (manifest_path.empty()) throw ConfigError("no manifest path given");
}

namespace {

// Everything the per-image worker stage produces for one manifest entry.
struct IngestedImage {
    std::string image_id;
    bool ok = false;
    std::string error;
    int width = 0;
    int height = 0;
    Hash64 dhash;
    DetectionBundle bundle;
};

void write_json_artifact(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw WriteError("cannot open artifact for writing: " + path.string());
    }
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) {
        throw WriteError("failed writing artifact: " + path.string());
    }
}

json box_to_json(const BoundingBox& b) {
    return json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}

// Runs image decode + hashing + backend analysis for every post on a small
// worker pool. Results land in a slot per manifest index, so the outcome is
// identical no matter how the threads interleave.
std::vector<IngestedImage> ingest_images(const std::vector<PostRecord>& posts,
                                         const fs::path& manifest_dir,
                                         const DetectionBackend& backend, int jobs) {
    std::vector<IngestedImage> results(posts.size());
    std::atomic<std::size_t> next{0};
    std::mutex fatal_mutex;
    std::exception_ptr fatal;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= posts.size()) return;
            {
                std::lock_guard lock(fatal_mutex);
                if (fatal) return;
            }
            IngestedImage& out = results[i];
            out.image_id = posts[i].post_id;
            try {
                fs::path image_path = posts[i].image_path;
                if (image_path.is_relative()) image_path = manifest_dir / image_path;
                const GrayImage gray = load_gray_image(image_path);
                out.width = gray.width;
                out.height = gray.height;
                out.dhash = compute_dhash(gray);
                out.bundle = backend.analyze_collage(
                    ImageRef{out.image_id, image_path, gray.width, gray.height});
                out.ok = true;
            } catch (const ImageDecodeError& e) {
                out.error = e.what();
            } catch (const BundleParseError& e) {
                out.error = e.what();
            } catch (const BackendUnavailableError& e) {
                out.error = e.what();
            } catch (...) {
                std::lock_guard lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
                return;
            }
        }
    };

    unsigned worker_count = jobs > 0 ? static_cast<unsigned>(jobs)
                                     : std::max(1u, std::thread::hardware_concurrency());
    if (!backend.thread_safe()) worker_count = 1;
    worker_count = std::min<unsigned>(worker_count, std::max<std::size_t>(posts.size(), 1));

    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (unsigned t = 0; t < worker_count; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    if (fatal) std::rethrow_exception(fatal);
    return results;
}

/// Faces from different embedding models live in incompatible spaces;
/// linking across them would fabricate identities. One declared model (or
/// none declared at all) is required across every bundle that carries face
/// embeddings.
void require_single_embedding_model(const std::vector<const IngestedImage*>& images) {
    std::set<std::string> models;
    bool any_undeclared = false;
    for (const IngestedImage* img : images) {
        bool has_face_embedding = false;
        for (const auto* faces : {&img->bundle.primary_faces, &img->bundle.secondary_faces}) {
            for (const DetectedFace& f : *faces) {
                if (f.embedding) has_face_embedding = true;
            }
        }
        if (!has_face_embedding) continue;
        if (img->bundle.embedding_model) {
            models.insert(*img->bundle.embedding_model);
        } else {
            any_undeclared = true;
        }
    }
    if (models.size() > 1 || (!models.empty() && any_undeclared)) {
        std::string list;
        for (const std::string& m : models) {
            if (!list.empty()) list += ", ";
            list += m;
        }
        if (any_undeclared) list += ", (undeclared)";
        throw Error("face embeddings come from mixed models (" + list +
                    "); cross-model distances are meaningless, refusing to link");
    }
}

struct AgeStats {
    double mean = 0.0;
    double median = 0.0;
};

AgeStats age_stats(std::vector<double> ages) {
    AgeStats stats;
    if (ages.empty()) return stats;
    std::sort(ages.begin(), ages.end());
    double sum = 0.0;
    for (const double a : ages) sum += a;
    stats.mean = sum / static_cast<double>(ages.size());
    const std::size_t mid = ages.size() / 2;
    stats.median = ages.size() % 2 == 1 ? ages[mid] : (ages[mid - 1] + ages[mid]) / 2.0;
    return stats;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    const std::unique_ptr<DetectionBackend> backend = make_backend(config.backend);

    std::error_code dir_error;
    fs::create_directories(config.output_dir, dir_error);
    if (dir_error) {
        throw WriteError("cannot create output directory " + config.output_dir.string() +
                         ": " + dir_error.message());
    }

    const std::vector<PostRecord> posts = ingest_manifest(config.manifest_path);
    const fs::path manifest_dir = config.manifest_path.parent_path();

    PipelineResult result;

    // Per-image stage: decode, hash, analyze.
    const std::vector<IngestedImage> images =
        ingest_images(posts, manifest_dir, *backend, config.jobs);
    std::vector<const IngestedImage*> live;
    for (const IngestedImage& img : images) {
        if (img.ok) {
            live.push_back(&img);
        } else {
            result.skipped.push_back(SkippedImage{img.image_id, img.error});
        }
    }
    result.report.images_ingested = static_cast<int>(live.size());

    // Classification filter.
    std::vector<const IngestedImage*> classified;
    for (const IngestedImage* img : live) {
        if (!config.stages.classify ||
            classify_collage(img->bundle, config.collage_score_threshold, &result.warnings)) {
            classified.push_back(img);
        } else {
            result.filtered_before_dedup.push_back(img->image_id);
        }
    }

    // Near-duplicate removal.
    if (config.stages.dedup) {
        std::vector<CollageImage> collages;
        collages.reserve(classified.size());
        for (const IngestedImage* img : classified) {
            CollageImage c;
            c.image_id = img->image_id;
            c.width = img->width;
            c.height = img->height;
            c.dhash = img->dhash;
            c.classifier_score = img->bundle.collage_score;
            c.image_embedding = img->bundle.image_embedding;
            collages.push_back(std::move(c));
        }
        result.dedup = dedup(collages, config.dedup);
    } else {
        for (const IngestedImage* img : classified) {
            result.dedup.kept.push_back(img->image_id);
        }
        std::sort(result.dedup.kept.begin(), result.dedup.kept.end());
    }
    result.report.images_kept_after_dedup = static_cast<int>(result.dedup.kept.size());
    {
        json removed = json::array();
        for (const RemovedImage& r : result.dedup.removed) {
            removed.push_back(json{{"image_id", r.image_id},
                                   {"kept_id", r.kept_id},
                                   {"reason", to_string(r.reason)}});
        }
        write_json_artifact(config.output_dir / "dedup.json",
                            json{{"filtered_before_dedup", result.filtered_before_dedup},
                                 {"kept", result.dedup.kept},
                                 {"removed", removed}});
    }

    std::vector<const IngestedImage*> kept;
    {
        std::map<std::string, const IngestedImage*> by_id;
        for (const IngestedImage* img : classified) by_id[img->image_id] = img;
        for (const std::string& id : result.dedup.kept) kept.push_back(by_id.at(id));
    }

    // Detector fusion: kept images become meetings, fused faces participants.
    if (config.stages.fusion) {
        for (const IngestedImage* img : kept) {
            const std::vector<FusedFace> faces =
                fuse_face_detections(img->bundle.primary_faces, img->bundle.secondary_faces);
            for (std::size_t f = 0; f < faces.size(); ++f) {
                Participant p;
                p.participant_id = img->image_id + "/f" + std::to_string(f);
                p.meeting_id = img->image_id;
                p.face_box = faces[f].box;
                p.embedding = faces[f].embedding;
                p.age_years = aggregate_age(faces[f].age_estimates);
                if (p.age_years) p.age_category = bin_age(*p.age_years);
                p.gender = resolve_gender(faces[f].gender_estimates);
                result.participants.push_back(std::move(p));
            }
        }
    }

    // Username reconstruction, tied back to faces per image.
    if (config.stages.username && config.stages.fusion) {
        for (const IngestedImage* img : kept) {
            const std::vector<WordToken> tokens =
                filter_tokens(img->bundle.word_tokens, config.ui_words, config.dictionary);
            const std::vector<UsernameCandidate> candidates =
                merge_word_tokens(tokens, config.word_merge_threshold);
            if (candidates.empty()) continue;

            std::vector<BoundingBox> face_boxes;
            std::vector<std::size_t> participant_index;
            for (std::size_t i = 0; i < result.participants.size(); ++i) {
                if (result.participants[i].meeting_id != img->image_id) continue;
                face_boxes.push_back(result.participants[i].face_box);
                participant_index.push_back(i);
            }
            const std::vector<std::size_t> assignment =
                assign_usernames(candidates, face_boxes);

            for (std::size_t c = 0; c < candidates.size(); ++c) {
                const NormalizedUsername normalized =
                    normalize_username(candidates[c].text, config.generic_names);
                CollageUsername u;
                u.image_id = img->image_id;
                u.text = normalized.text;
                u.raw = candidates[c].text;
                u.word_count = candidates[c].word_count;
                u.generic = normalized.generic;
                if (assignment[c] != kUnassigned) {
                    Participant& p = result.participants[participant_index[assignment[c]]];
                    p.username = normalized.text;
                    p.username_generic = normalized.generic;
                    u.participant_id = p.participant_id;
                }
                result.usernames.push_back(std::move(u));
            }
        }
    }

    {
        json participants = json::array();
        for (const Participant& p : result.participants) {
            json entry{{"participant_id", p.participant_id},
                       {"meeting_id", p.meeting_id},
                       {"face_box", box_to_json(p.face_box)},
                       {"has_embedding", p.embedding.has_value()},
                       {"username_generic", p.username_generic}};
            entry["age_years"] = p.age_years ? json(*p.age_years) : json(nullptr);
            entry["age_category"] =
                p.age_category ? json(to_string(*p.age_category)) : json(nullptr);
            entry["gender"] = p.gender ? json(to_string(*p.gender)) : json(nullptr);
            entry["username"] = p.username ? json(*p.username) : json(nullptr);
            participants.push_back(std::move(entry));
        }
        write_json_artifact(config.output_dir / "participants.json", participants);

        json usernames = json::array();
        for (const CollageUsername& u : result.usernames) {
            usernames.push_back(
                json{{"image_id", u.image_id},
                     {"text", u.text},
                     {"raw", u.raw},
                     {"word_count", u.word_count},
                     {"generic", u.generic},
                     {"participant_id",
                      u.participant_id.empty() ? json(nullptr) : json(u.participant_id)}});
        }
        write_json_artifact(config.output_dir / "usernames.json", usernames);
    }

    // Identity linkage across meetings.
    if (config.stages.linkage) {
        require_single_embedding_model(kept);
        result.clusters = link_identities(result.participants, config.face_link_threshold,
                                          /*use_username=*/true, /*use_face=*/true,
                                          /*exclude_generic=*/true);
    }
    {
        json clusters = json::array();
        for (const IdentityCluster& c : result.clusters) {
            clusters.push_back(json{
                {"identity_id", c.identity_id},
                {"members", c.members},
                {"meetings", c.meetings},
                {"canonical_username",
                 c.canonical_username ? json(*c.canonical_username) : json(nullptr)}});
        }
        write_json_artifact(config.output_dir / "clusters.json", clusters);
    }

    // Co-participation graph.
    if (config.stages.graph) {
        std::map<std::string, std::set<std::string>> meetings;
        for (const IdentityCluster& c : result.clusters) {
            for (const std::string& m : c.meetings) meetings[m].insert(c.identity_id);
        }
        result.social_graph = build_social_graph(meetings);
        export_edge_list(result.social_graph, config.output_dir / "edges.csv");
        if (!result.social_graph.nodes.empty()) {
            result.report.graph = component_stats(result.social_graph);
        }
    }

    // Statistics over the surviving participants.
    {
        StatisticsReport& rep = result.report;
        rep.total_faces = static_cast<int>(result.participants.size());
        rep.mean_participants_per_collage =
            rep.images_kept_after_dedup > 0
                ? static_cast<double>(rep.total_faces) / rep.images_kept_after_dedup
                : 0.0;

        std::vector<double> ages;
        std::map<AgeCategory, int> category_counts;
        for (const Participant& p : result.participants) {
            if (p.age_years) ages.push_back(*p.age_years);
            if (p.age_category) ++category_counts[*p.age_category];
            if (p.gender) ++rep.gender_counts[to_string(*p.gender)];
        }
        const AgeStats age = age_stats(std::move(ages));
        rep.age_mean = age.mean;
        rep.age_median = age.median;
        int categorized = 0;
        for (const auto& [cat, count] : category_counts) categorized += count;
        for (const AgeCategory cat : {AgeCategory::adolescent, AgeCategory::adult,
                                      AgeCategory::child, AgeCategory::older_adult}) {
            const int count = category_counts.count(cat) ? category_counts.at(cat) : 0;
            rep.age_category_shares[to_string(cat)] =
                categorized > 0 ? static_cast<double>(count) / categorized : 0.0;
        }

        // Username statistics run over distinct normalized usernames,
        // including ones no face claimed.
        std::map<std::string, std::pair<int, std::set<std::string>>> by_username;
        for (const CollageUsername& u : result.usernames) {
            auto& [word_count, meetings] = by_username[u.text];
            word_count = u.word_count;
            meetings.insert(u.image_id);
        }
        rep.distinct_usernames = static_cast<int>(by_username.size());
        for (const auto& [text, info] : by_username) {
            const auto& [word_count, meetings] = info;
            ++rep.username_word_count_histogram[std::to_string(word_count)];
            if (word_count >= 2) {
                ++rep.multiword_usernames;
                if (meetings.size() >= 2) ++rep.reused_usernames;
            }
        }

        if (config.stages.linkage) {
            const std::vector<IdentityCluster> face_clusters =
                link_identities(result.participants, config.face_link_threshold,
                                /*use_username=*/false, /*use_face=*/true,
                                /*exclude_generic=*/true);
            for (const IdentityCluster& c : face_clusters) {
                if (c.meetings.size() >= 2) ++rep.repeated_face_identities;
            }
        }
    }

    emit_report(result.report, config.output_dir / "report.json");

    {
        json skipped = json::array();
        for (const SkippedImage& s : result.skipped) {
            skipped.push_back(json{{"image_id", s.image_id}, {"reason", s.reason}});
        }
        write_json_artifact(config.output_dir / "skipped.json",
                            json{{"skipped", skipped}, {"warnings", result.warnings}});
    }

    return result;
}

}  // namespace mosaiclink
