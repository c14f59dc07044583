#include "mosaiclink/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mosaiclink/errors.hpp"

namespace mosaiclink {

std::vector<FusedFace> fuse_face_detections(const std::vector<DetectedFace>& primary,
                                            const std::vector<DetectedFace>& secondary) {
    std::vector<FusedFace> fused;
    fused.reserve(primary.size() + secondary.size());
    for (const DetectedFace& p : primary) {
        FusedFace f;
        f.box = p.box;
        f.contributing.insert(Detector::primary_detector);
        f.embedding = p.embedding;
        f.age_estimates = p.age_estimates;
        f.gender_estimates = p.gender_estimates;
        fused.push_back(std::move(f));
    }

    // Canonical processing order for secondaries keeps merges independent of
    // detector output order.
    std::vector<std::size_t> sec_order(secondary.size());
    std::iota(sec_order.begin(), sec_order.end(), 0);
    std::stable_sort(sec_order.begin(), sec_order.end(), [&](std::size_t a, std::size_t b) {
        const BoundingBox& ba = secondary[a].box;
        const BoundingBox& bb = secondary[b].box;
        return std::tie(ba.y, ba.x, ba.w, ba.h) < std::tie(bb.y, bb.x, bb.w, bb.h);
    });

    std::vector<FusedFace> standalone;
    for (const std::size_t si : sec_order) {
        const DetectedFace& s = secondary[si];
        double best_area = 0.0;
        std::size_t best = primary.size();
        for (std::size_t pi = 0; pi < primary.size(); ++pi) {
            const double area = intersection_area(s.box, primary[pi].box);
            if (area > best_area) {
                best_area = area;
                best = pi;
            }
        }
        if (best == primary.size()) {
            FusedFace f;
            f.box = s.box;
            f.contributing.insert(Detector::secondary_detector);
            f.embedding = s.embedding;
            f.age_estimates = s.age_estimates;
            f.gender_estimates = s.gender_estimates;
            standalone.push_back(std::move(f));
            continue;
        }
        FusedFace& target = fused[best];
        target.contributing.insert(Detector::secondary_detector);
        if (!target.embedding && s.embedding) {
            target.embedding = s.embedding;
        }
        target.age_estimates.insert(target.age_estimates.end(), s.age_estimates.begin(),
                                    s.age_estimates.end());
        target.gender_estimates.insert(target.gender_estimates.end(),
                                       s.gender_estimates.begin(), s.gender_estimates.end());
    }

    fused.insert(fused.end(), std::make_move_iterator(standalone.begin()),
                 std::make_move_iterator(standalone.end()));
    return fused;
}

std::optional<double> aggregate_age(const std::vector<double>& estimates) {
    if (estimates.empty()) return std::nullopt;
    double sum = 0.0;
    for (const double a : estimates) {
        if (a < 0.0) {
            throw InvalidAgeError("negative age estimate: " + std::to_string(a));
        }
        sum += a;
    }
    return sum / static_cast<double>(estimates.size());
}

AgeCategory bin_age(double age_years) {
    if (age_years < 0.0) {
        throw InvalidAgeError("negative age: " + std::to_string(age_years));
    }
    if (age_years <= 12.0) return AgeCategory::child;
    if (age_years <= 17.0) return AgeCategory::adolescent;
    if (age_years < 65.0) return AgeCategory::adult;
    return AgeCategory::older_adult;
}

std::optional<Gender> resolve_gender(const std::vector<Gender>& estimates) {
    if (estimates.empty()) return std::nullopt;
    const Gender first = estimates.front();
    for (const Gender g : estimates) {
        if (g != first) return std::nullopt;
    }
    return first;
}

}  // namespace mosaiclink
