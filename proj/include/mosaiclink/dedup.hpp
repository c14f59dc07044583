#pragma once

#include <span>
#include <string>
#include <vector>

#include "mosaiclink/image.hpp"
#include "mosaiclink/types.hpp"

namespace mosaiclink {

enum class EmbeddingCombine {
    both_required,   ///< cosine AND euclidean must fall under their thresholds
    either_suffices  ///< one rule is enough
};

enum class DedupReason { hash, embedding };

const char* to_string(DedupReason r);

enum class DistanceMetric { cosine, euclidean };

struct DedupCriteria {
    double hamming_threshold = 1.2;
    double cosine_threshold = 0.0035;
    double euclidean_threshold = 25.0;
    EmbeddingCombine embedding_combine = EmbeddingCombine::both_required;
};

struct RemovedImage {
    std::string image_id;
    std::string kept_id;  ///< the surviving representative it matched
    DedupReason reason;
};

struct DedupOutcome {
    std::vector<std::string> kept;  ///< ascending image_id
    std::vector<RemovedImage> removed;
};

/// Difference hash: the grid is area-resampled to 9 columns x 8 rows and bit
/// (row*8 + col) is set iff pixel[row][col] < pixel[row][col+1] (row-wise,
/// strict comparison). A 9x8 input bypasses resampling. Neighbours closer
/// than 1e-6 count as equal so that round-off introduced by fractional-ratio
/// resampling cannot set bits (a flat image always hashes to zero).
Hash64 compute_dhash(const GrayImage& image);

/// Number of differing bits.
int hamming_distance(Hash64 a, Hash64 b);

/// Euclidean: L2 norm of the difference. Cosine: 1 - dot/(|e1||e2|), clamped
/// at zero. Throws DimensionError on length mismatch and
/// DegenerateVectorError for a zero vector under cosine.
double embedding_pair_distance(std::span<const double> e1, std::span<const double> e2,
                               DistanceMetric metric);

/// Greedy near-duplicate removal in ascending image_id order: an image is
/// removed when it matches any earlier kept image by Hamming distance or by
/// the embedding rule (skipped for pairs where either side lacks an
/// embedding; the cosine side is also skipped for zero-norm embeddings).
/// Every input must carry a dhash.
DedupOutcome dedup(const std::vector<CollageImage>& images, const DedupCriteria& criteria = {});

}  // namespace mosaiclink
