#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "mosaiclink/graph.hpp"

namespace mosaiclink {

// Aggregate statistics over one pipeline run. Every field is always present
// in the serialized form; maps may be empty when no data exists, except
// age_category_shares which always carries all four categories.
struct StatisticsReport {
    int images_ingested = 0;
    int images_kept_after_dedup = 0;
    double mean_participants_per_collage = 0.0;
    int total_faces = 0;
    double age_mean = 0.0;    // 0 when no face carries an age
    double age_median = 0.0;  // likewise
    std::map<std::string, double> age_category_shares;
    std::map<std::string, int> gender_counts;  // only non-zero counts
    std::map<std::string, int> username_word_count_histogram;  // key: word count
    int distinct_usernames = 0;
    int multiword_usernames = 0;
    int reused_usernames = 0;  // multi-word usernames seen in several meetings
    int repeated_face_identities = 0;  // face-evidence clusters spanning meetings
    ComponentStats graph;

    bool operator==(const StatisticsReport&) const = default;
};

/// Canonical serialized form: two-space indent, keys in lexicographic order,
/// every real rendered with exactly four decimals. Equal reports always
/// produce identical bytes.
std::string report_to_json(const StatisticsReport& report);

/// Writes report_to_json to a file. Throws WriteError on I/O failure.
void emit_report(const StatisticsReport& report, const std::filesystem::path& path);

/// Parses a serialized report back; inverse of report_to_json up to the
/// four-decimal rounding it applies.
StatisticsReport report_from_json(const std::string& text);

}  // namespace mosaiclink
