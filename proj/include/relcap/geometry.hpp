#pragma once

#include <optional>

namespace relcap {

// Axis-aligned box in normalized image coordinates, y growing downward.
struct BoundingBox {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

  bool valid() const {
    return x1 < x2 && y1 < y2 && x1 >= 0.0 && y1 >= 0.0 && x2 <= 1.0 && y2 <= 1.0;
  }
  double cx() const { return 0.5 * (x1 + x2); }
  double cy() const { return 0.5 * (y1 + y2); }
  double area() const { return (x2 - x1) * (y2 - y1); }
};

// Intersection area over union area; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

// Every edge of b strictly inside a.
bool contains_strictly(const BoundingBox& a, const BoundingBox& b);

struct RelativeGeometry {
  double distance;       // centroid distance
  double angle_deg;      // in [0, 360); measured counterclockwise with y flipped up
  double diagonal_ratio; // distance / sqrt(2), the normalized image diagonal
  bool coincident;       // centroids equal, angle undefined
};

RelativeGeometry relative_geometry(const BoundingBox& a, const BoundingBox& b);

// Spatial relation classes:
//   1 inside   (b strictly inside a)
//   2 cover    (b strictly covers a)
//   3 overlap  (IoU > 0.5, or coincident centroids)
//   4..11      45-degree angle sectors, class = floor(angle/45) + 4
// Returns nullopt when the pair is too far apart (diagonal ratio > 0.5 and
// IoU <= 0.5): no edge.
std::optional<int> classify_spatial(const BoundingBox& a, const BoundingBox& b);

constexpr int kSpatialClassCount = 11;

// Label names for classes 1..11, index 0 unused ("self" belongs to the graph,
// not the taxonomy). Sector names are positional; the 8 directions are only
// distinguished by sector index.
const char* spatial_class_name(int class_id);

}  // namespace relcap
