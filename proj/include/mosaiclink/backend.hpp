#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mosaiclink/fusion.hpp"
#include "mosaiclink/types.hpp"
#include "mosaiclink/username.hpp"

namespace mosaiclink {

// Handle to a decoded image the backend may analyze.
struct ImageRef {
    std::string image_id;
    std::filesystem::path path;
    int width = 0;
    int height = 0;
};

// Everything a detection provider reports for one collage image.
struct DetectionBundle {
    std::string image_id;
    std::optional<double> collage_score;  // [0,1]
    std::optional<std::string> embedding_model;
    std::vector<DetectedFace> primary_faces;
    std::vector<DetectedFace> secondary_faces;
    std::vector<WordToken> word_tokens;
    std::optional<Embedding> image_embedding;

    bool operator==(const DetectionBundle&) const = default;
};

enum class Capability { faces, embeddings, age, gender, words, collage_score };

struct BackendDescriptor {
    std::string name;
    std::set<Capability> capabilities;
};

// Contract implemented by every detection provider. Implementations must
// tolerate concurrent analyze_collage calls or declare themselves
// single-threaded via thread_safe().
class DetectionBackend {
public:
    virtual ~DetectionBackend() = default;

    virtual const BackendDescriptor& descriptor() const = 0;
    virtual bool thread_safe() const { return true; }

    /// Populates a bundle for the image per the declared capabilities;
    /// fields outside them stay absent rather than fabricated.
    /// Throws ImageDecodeError for unreadable images and
    /// BackendUnavailableError when the provider cannot be reached.
    virtual DetectionBundle analyze_collage(const ImageRef& image) const = 0;
};

/// Replays detections from a JSON sidecar stored next to each image
/// (`<image>.bundle.json`). An image without a sidecar yields an empty
/// bundle; a malformed sidecar raises BundleParseError naming the bad field.
class FixtureBackend final : public DetectionBackend {
public:
    const BackendDescriptor& descriptor() const override;
    DetectionBundle analyze_collage(const ImageRef& image) const override;
};

/// Parses sidecar JSON text into a bundle, validating every field against
/// the image dimensions (pass 0x0 to skip the containment checks).
DetectionBundle parse_bundle_json(const std::string& text, const std::string& image_id,
                                  int image_width, int image_height);

/// True iff the bundle's collage score reaches the threshold. A missing
/// score passes permissively; when `warnings` is given, that case appends a
/// note instead of failing the image.
bool classify_collage(const DetectionBundle& bundle, double threshold,
                      std::vector<std::string>* warnings = nullptr);

/// Backend registry keyed by name ("fixture"); unknown names → ConfigError.
std::unique_ptr<DetectionBackend> make_backend(const std::string& name);

// Sidecar schema revision understood by this build.
inline constexpr int kBundleSchemaVersion = 1;

}  // namespace mosaiclink
