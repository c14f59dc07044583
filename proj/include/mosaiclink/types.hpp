#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mosaiclink/geometry.hpp"

namespace mosaiclink {

enum class PostSource { twitter, instagram, other };

enum class AgeCategory { child, adolescent, adult, older_adult };

enum class Gender { male, female };

enum class Detector { primary_detector, secondary_detector };

/// Face embeddings are fixed-length vectors; image-level embeddings are
/// backend-defined and may have any dimension.
inline constexpr std::size_t kFaceEmbeddingDim = 128;

using Embedding = std::vector<double>;

/// 64-bit difference hash of an image.
struct Hash64 {
    std::uint64_t bits = 0;

    friend bool operator==(Hash64, Hash64) = default;
};

/// An ingested social post pointing at one image.
struct PostRecord {
    std::string post_id;
    PostSource source = PostSource::other;
    std::string image_path;
    std::vector<std::string> tags;
};

/// One collage image flowing through the pipeline. The dhash is filled in by
/// the hashing stage before dedup runs; the image-level embedding and the
/// classifier score come from the detection backend when it provides them.
struct CollageImage {
    std::string image_id;
    PostRecord post;
    int width = 0;
    int height = 0;
    std::optional<Hash64> dhash;
    std::optional<double> classifier_score;
    std::optional<Embedding> image_embedding;
};

/// A fused face within one meeting, with everything extracted for it.
struct Participant {
    std::string participant_id;
    std::string meeting_id;  ///< equals the owning collage's image_id
    BoundingBox face_box;
    std::optional<Embedding> embedding;  ///< kFaceEmbeddingDim components when present
    std::optional<double> age_years;
    std::optional<AgeCategory> age_category;
    std::optional<Gender> gender;
    std::optional<std::string> username;  ///< normalized
    bool username_generic = false;
};

const char* to_string(PostSource s);
const char* to_string(AgeCategory c);
const char* to_string(Gender g);

std::optional<PostSource> post_source_from_string(const std::string& s);
std::optional<Gender> gender_from_string(const std::string& s);

}  // namespace mosaiclink
