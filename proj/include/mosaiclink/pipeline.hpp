#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "mosaiclink/dedup.hpp"
#include "mosaiclink/graph.hpp"
#include "mosaiclink/linkage.hpp"
#include "mosaiclink/report.hpp"
#include "mosaiclink/types.hpp"
#include "mosaiclink/wordlists.hpp"

namespace mosaiclink {

// Which stages of the fixed classify → dedup → fusion → username → linkage →
// graph order actually run. Disabling a stage empties everything that flows
// from it (no fusion means no participants, and so on).
struct StageSet {
    bool classify = true;
    bool dedup = true;
    bool fusion = true;
    bool username = true;
    bool linkage = true;
    bool graph = true;
};

/// Parses a comma-separated stage list ("classify,dedup,fusion").
/// Throws ConfigError on an unknown stage name.
StageSet parse_stage_set(const std::string& names);

struct PipelineConfig {
    std::filesystem::path manifest_path;
    std::string backend = "fixture";
    DedupCriteria dedup;
    double word_merge_threshold = 10.0;
    double face_link_threshold = 0.3;
    double collage_score_threshold = 0.5;
    StageSet stages;
    std::filesystem::path output_dir = "out";
    int jobs = 0;  // worker threads for per-image stages; 0 = hardware default

    std::set<std::string> ui_words = default_ui_word_set();
    std::set<std::string> dictionary;
    std::set<std::string> generic_names = default_generic_names();

    /// Throws ConfigError when a threshold is negative or the job count
    /// is below zero.
    void validate() const;
};

// An image the run gave up on, with the error that forced the skip.
struct SkippedImage {
    std::string image_id;
    std::string reason;
};

// A reconstructed username within one collage, possibly tied to a face.
struct CollageUsername {
    std::string image_id;
    std::string text;  // normalized
    std::string raw;
    int word_count = 1;
    bool generic = false;
    std::string participant_id;  // empty when no face claimed it
};

struct PipelineResult {
    StatisticsReport report;
    SocialGraphData social_graph;
    DedupOutcome dedup;
    std::vector<std::string> filtered_before_dedup;  // failed the collage classifier
    std::vector<Participant> participants;
    std::vector<CollageUsername> usernames;
    std::vector<IdentityCluster> clusters;
    std::vector<SkippedImage> skipped;
    std::vector<std::string> warnings;
};

/// Runs the full pipeline over a manifest: ingest, per-image analysis on a
/// worker pool, then the sequential classify/dedup/fusion/username/linkage/
/// graph/report stages. Each stage writes its artifact into
/// config.output_dir as soon as it completes (dedup.json, participants.json,
/// usernames.json, clusters.json, edges.csv, report.json, skipped.json), so
/// artifacts survive a downstream failure. Per-image decode and bundle
/// errors skip the image; errors that would corrupt cross-image results
/// (say, face embeddings from different models) abort the run.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace mosaiclink
