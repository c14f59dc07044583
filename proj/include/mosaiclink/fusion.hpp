#pragma once

#include <optional>
#include <set>
#include <vector>

#include "mosaiclink/geometry.hpp"
#include "mosaiclink/types.hpp"

namespace mosaiclink {

// A face detection emitted by one of the two detectors, prior to fusion.
struct DetectedFace {
    BoundingBox box;
    Detector detector = Detector::primary_detector;
    std::optional<Embedding> embedding;
    std::vector<double> age_estimates;       // zero or one entry per detector
    std::vector<Gender> gender_estimates;    // zero or one entry per detector

    bool operator==(const DetectedFace&) const = default;
};

// A face after detector fusion, carrying pooled attribute evidence.
struct FusedFace {
    BoundingBox box;
    std::set<Detector> contributing;
    std::optional<Embedding> embedding;
    std::vector<double> age_estimates;
    std::vector<Gender> gender_estimates;

    bool operator==(const FusedFace&) const = default;
};

/// Combines the outputs of both detectors for one image.
///
/// Every primary detection survives with its own bounding box. Each secondary
/// detection is merged into the primary box it overlaps most (ties go to the
/// earliest primary); a merged secondary contributes its age and gender
/// estimates, and supplies its embedding only when the primary lacks one.
/// Secondary detections that overlap no primary are appended as standalone
/// faces, ordered by (y, x, w, h) for reproducibility.
std::vector<FusedFace> fuse_face_detections(const std::vector<DetectedFace>& primary,
                                            const std::vector<DetectedFace>& secondary);

/// Mean of the estimates; std::nullopt when none were provided.
/// Throws InvalidAgeError on a negative estimate.
std::optional<double> aggregate_age(const std::vector<double>& estimates);

/// Maps an age in years to its category. Throws InvalidAgeError when negative.
AgeCategory bin_age(double age_years);

/// Unanimous estimates yield a value; conflicts and empty input yield nullopt.
std::optional<Gender> resolve_gender(const std::vector<Gender>& estimates);

}  // namespace mosaiclink
