#include "mosaiclink/dedup.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "mosaiclink/errors.hpp"

namespace mosaiclink {

const char* to_string(DedupReason r) {
    return r == DedupReason::hash ? "hash" : "embedding";
}

Hash64 compute_dhash(const GrayImage& image) {
    if (image.width <= 0 || image.height <= 0 || image.pixels.empty()) {
        throw ImageDecodeError("compute_dhash: empty image");
    }
    const GrayImage grid = resample_area(image, 9, 8);
    // Fractional-ratio resampling leaves sub-1e-8 round-off on the averaged
    // values; without a tie band a flat image would hash to noise.
    constexpr double kTieEpsilon = 1e-6;
    Hash64 h;
    for (int row = 0; row < 8; ++row) {
        for (int col = 0; col < 8; ++col) {
            if (grid.at(row, col) + kTieEpsilon < grid.at(row, col + 1)) {
                h.bits |= 1ULL << (row * 8 + col);
            }
        }
    }
    return h;
}

int hamming_distance(Hash64 a, Hash64 b) {
    return std::popcount(a.bits ^ b.bits);
}

double embedding_pair_distance(std::span<const double> e1, std::span<const double> e2,
                               DistanceMetric metric) {
    if (e1.size() != e2.size()) {
        throw DimensionError("embedding length mismatch: " + std::to_string(e1.size()) +
                             " vs " + std::to_string(e2.size()));
    }
    if (metric == DistanceMetric::euclidean) {
        double sum = 0.0;
        for (std::size_t i = 0; i < e1.size(); ++i) {
            const double d = e1[i] - e2[i];
            sum += d * d;
        }
        return std::sqrt(sum);
    }
    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        dot += e1[i] * e2[i];
        n1 += e1[i] * e1[i];
        n2 += e2[i] * e2[i];
    }
    if (n1 == 0.0 || n2 == 0.0) {
        throw DegenerateVectorError("cosine distance is undefined for a zero vector");
    }
    return std::max(0.0, 1.0 - dot / (std::sqrt(n1) * std::sqrt(n2)));
}

namespace {

bool embedding_rule_matches(const Embedding& a, const Embedding& b, const DedupCriteria& c) {
    const bool zero_norm =
        std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; }) ||
        std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });

    if (c.embedding_combine == EmbeddingCombine::both_required) {
        if (zero_norm) return false;  // cosine side cannot be assessed
        const double cos = embedding_pair_distance(a, b, DistanceMetric::cosine);
        if (cos > c.cosine_threshold) return false;
        const double euc = embedding_pair_distance(a, b, DistanceMetric::euclidean);
        return euc <= c.euclidean_threshold;
    }
    if (!zero_norm &&
        embedding_pair_distance(a, b, DistanceMetric::cosine) <= c.cosine_threshold) {
        return true;
    }
    return embedding_pair_distance(a, b, DistanceMetric::euclidean) <= c.euclidean_threshold;
}

}  // namespace

DedupOutcome dedup(const std::vector<CollageImage>& images, const DedupCriteria& criteria) {
    std::vector<std::size_t> order(images.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return images[a].image_id < images[b].image_id;
    });

    for (const auto& img : images) {
        if (!img.dhash) {
            throw std::invalid_argument("dedup: image " + img.image_id + " has no dhash");
        }
    }

    DedupOutcome outcome;
    std::vector<std::size_t> kept_idx;
    kept_idx.reserve(images.size());
    for (const std::size_t i : order) {
        const CollageImage& img = images[i];
        std::optional<RemovedImage> removal;
        for (const std::size_t k : kept_idx) {
            const CollageImage& rep = images[k];
            if (hamming_distance(*img.dhash, *rep.dhash) <= criteria.hamming_threshold) {
                removal = RemovedImage{img.image_id, rep.image_id, DedupReason::hash};
                break;
            }
            if (img.image_embedding && rep.image_embedding &&
                embedding_rule_matches(*img.image_embedding, *rep.image_embedding, criteria)) {
                removal = RemovedImage{img.image_id, rep.image_id, DedupReason::embedding};
                break;
            }
        }
        if (removal) {
            outcome.removed.push_back(std::move(*removal));
        } else {
            kept_idx.push_back(i);
            outcome.kept.push_back(img.image_id);
        }
    }
    return outcome;
}

}  // namespace mosaiclink
