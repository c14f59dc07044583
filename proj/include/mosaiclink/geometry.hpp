#pragma once

#include <algorithm>
#include <cmath>

namespace mosaiclink {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned box stored as left-top corner plus width/height, in pixels.
/// Coordinates are reals: detector and OCR outputs may be sub-pixel.
struct BoundingBox {
    double x = 0.0;  ///< left
    double y = 0.0;  ///< top
    double w = 0.0;
    double h = 0.0;

    double right() const { return x + w; }
    double bottom() const { return y + h; }
    double area() const { return w * h; }

    Point top_left() const { return {x, y}; }
    Point top_right() const { return {x + w, y}; }
    Point center() const { return {x + w / 2.0, y + h / 2.0}; }

    bool valid() const { return w > 0.0 && h > 0.0 && x >= 0.0 && y >= 0.0; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Overlap area of two boxes. Zero when disjoint; boxes that only touch on an
/// edge do not intersect.
double intersection_area(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between two points.
double point_distance(Point p, Point q);

/// Smallest box covering both inputs.
BoundingBox box_union(const BoundingBox& a, const BoundingBox& b);

}  // namespace mosaiclink
