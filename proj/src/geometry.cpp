#include "mosaiclink/geometry.hpp"

namespace mosaiclink {

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const double ow = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    const double oh = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    return std::max(0.0, ow) * std::max(0.0, oh);
}

double point_distance(Point p, Point q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

BoundingBox box_union(const BoundingBox& a, const BoundingBox& b) {
    const double x = std::min(a.x, b.x);
    const double y = std::min(a.y, b.y);
    const double r = std::max(a.right(), b.right());
    const double btm = std::max(a.bottom(), b.bottom());
    return {x, y, r - x, btm - y};
}

}  // namespace mosaiclink
