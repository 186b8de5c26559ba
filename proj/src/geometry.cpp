#include "relcap/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace relcap {

double iou(const BoundingBox& a, const BoundingBox& b) {
  double ix = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  double iy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  double inter = ix * iy;
  double uni = a.area() + b.area() - inter;
  return inter / uni;
}

bool contains_strictly(const BoundingBox& a, const BoundingBox& b) {
  return a.x1 < b.x1 && b.x2 < a.x2 && a.y1 < b.y1 && b.y2 < a.y2;
}

RelativeGeometry relative_geometry(const BoundingBox& a, const BoundingBox& b) {
  double dx = b.cx() - a.cx();
  double dy = b.cy() - a.cy();
  RelativeGeometry g;
  g.distance = std::sqrt(dx * dx + dy * dy);
  g.diagonal_ratio = g.distance / std::sqrt(2.0);
  g.coincident = dx == 0.0 && dy == 0.0;
  if (g.coincident) {
    g.angle_deg = 0.0;
    return g;
  }
  // y flipped so the angle is in the usual math orientation
  double deg = std::atan2(-dy, dx) * (180.0 / M_PI);
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg = 0.0;
  g.angle_deg = deg;
  return g;
}

namespace {

// Sector k covers [45k, 45(k+1)) degrees; boundaries resolved by exact sign
// and magnitude comparisons on (dx, dy) so multiples of 45 land in the upper
// sector without trig rounding.
int angle_sector(double dx, double dy) {
  if (dx > 0.0 && dy >= 0.0 && dy < dx) return 0;
  if (dx > 0.0 && dy >= dx) return 1;
  if (dx <= 0.0 && dy > 0.0 && dy > -dx) return 2;
  if (dx < 0.0 && dy > 0.0 && dy <= -dx) return 3;
  if (dx < 0.0 && dy <= 0.0 && -dy < -dx) return 4;
  if (dx < 0.0 && dy < 0.0 && -dy >= -dx) return 5;
  if (dx >= 0.0 && dy < 0.0 && -dy > dx) return 6;
  if (dx > 0.0 && dy < 0.0 && -dy <= dx) return 7;
  throw std::logic_error("angle_sector: unreachable");
}

}  // namespace

std::optional<int> classify_spatial(const BoundingBox& a, const BoundingBox& b) {
  if (contains_strictly(a, b)) return 1;
  if (contains_strictly(b, a)) return 2;
  if (iou(a, b) > 0.5) return 3;
  double dx = b.cx() - a.cx();
  double dy = -(b.cy() - a.cy());
  if (dx == 0.0 && dy == 0.0) return 3;  // overlapping in the ordinary sense
  double dist = std::sqrt(dx * dx + dy * dy);
  if (dist / std::sqrt(2.0) <= 0.5) return 4 + angle_sector(dx, dy);
  return std::nullopt;
}

const char* spatial_class_name(int class_id) {
  static const char* names[] = {"",         "inside",   "cover",    "overlap",
                                "sector_1", "sector_2", "sector_3", "sector_4",
                                "sector_5", "sector_6", "sector_7", "sector_8"};
  if (class_id < 1 || class_id > kSpatialClassCount) {
    throw std::out_of_range("spatial_class_name: class " + std::to_string(class_id));
  }
  return names[class_id];
}

}  // namespace relcap
