#include <doctest.h>

#include <cmath>
#include <optional>

#include "relcap/geometry.hpp"
#include "relcap/rng.hpp"

using namespace relcap;

namespace {

// Straight-line re-implementation of the taxonomy, kept deliberately
// independent of the library: trig-based sector selection, explicit if
// chains, its own area arithmetic.
std::optional<int> oracle_classify(const BoundingBox& a, const BoundingBox& b) {
  bool a_holds_b = a.x1 < b.x1 && a.y1 < b.y1 && a.x2 > b.x2 && a.y2 > b.y2;
  if (a_holds_b) return 1;
  bool b_holds_a = b.x1 < a.x1 && b.y1 < a.y1 && b.x2 > a.x2 && b.y2 > a.y2;
  if (b_holds_a) return 2;

  double left = a.x1 > b.x1 ? a.x1 : b.x1;
  double right = a.x2 < b.x2 ? a.x2 : b.x2;
  double top = a.y1 > b.y1 ? a.y1 : b.y1;
  double bottom = a.y2 < b.y2 ? a.y2 : b.y2;
  double inter = 0.0;
  if (right > left && bottom > top) inter = (right - left) * (bottom - top);
  double area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
  double area_b = (b.x2 - b.x1) * (b.y2 - b.y1);
  double iou_val = inter > 0.0 ? inter / (area_a + area_b - inter) : 0.0;
  if (iou_val > 0.5) return 3;

  double ax = 0.5 * (a.x1 + a.x2), ay = 0.5 * (a.y1 + a.y2);
  double bx = 0.5 * (b.x1 + b.x2), by = 0.5 * (b.y1 + b.y2);
  double dx = bx - ax;
  double dy = ay - by;  // flip y
  if (dx == 0.0 && dy == 0.0) return 3;
  double dist = std::hypot(dx, dy);
  if (dist / std::sqrt(2.0) > 0.5) return std::nullopt;
  double theta = std::atan2(dy, dx) * 180.0 / M_PI;
  if (theta < 0.0) theta += 360.0;
  if (theta < 45.0) return 4;
  if (theta < 90.0) return 5;
  if (theta < 135.0) return 6;
  if (theta < 180.0) return 7;
  if (theta < 225.0) return 8;
  if (theta < 270.0) return 9;
  if (theta < 315.0) return 10;
  return 11;
}

BoundingBox random_box(Rng& rng) {
  double w = rng.uniform(0.02, 0.6);
  double h = rng.uniform(0.02, 0.6);
  double x1 = rng.uniform(0.0, 1.0 - w);
  double y1 = rng.uniform(0.0, 1.0 - h);
  return {x1, y1, x1 + w, y1 + h};
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("iou basics") {
  BoundingBox a{0.1, 0.2, 0.5, 0.6};
  CHECK(iou(a, a) == 1.0);
  BoundingBox far{0.7, 0.7, 0.9, 0.9};
  CHECK(iou(a, far) == 0.0);
  BoundingBox p{0.0, 0.0, 0.5, 0.5};
  BoundingBox q{0.25, 0.25, 0.75, 0.75};
  // direct area arithmetic: intersection 0.25^2, union 2*0.25 - 0.0625
  double expected = 0.0625 / 0.4375;
  CHECK(iou(p, q) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(iou(p, q) == doctest::Approx(0.142857).epsilon(1e-5));
}

TEST_CASE("iou is symmetric and bounded on random pairs") {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    BoundingBox a = random_box(rng);
    BoundingBox b = random_box(rng);
    double ab = iou(a, b);
    CHECK(ab == iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("relative geometry of a horizontal pair") {
  BoundingBox a{0.1, 0.1, 0.3, 0.3};  // centroid (0.2, 0.2)
  BoundingBox b{0.5, 0.1, 0.7, 0.3};  // centroid (0.6, 0.2)
  RelativeGeometry g = relative_geometry(a, b);
  CHECK(g.distance == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(g.angle_deg == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.diagonal_ratio == doctest::Approx(0.4 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(g.coincident);
}

TEST_CASE("relative geometry flips the downward y axis") {
  BoundingBox a{0.4, 0.4, 0.6, 0.6};  // centroid (0.5, 0.5)
  BoundingBox b{0.4, 0.8, 0.6, 1.0};  // centroid (0.5, 0.9), below in image terms
  RelativeGeometry g = relative_geometry(a, b);
  CHECK(g.angle_deg == doctest::Approx(270.0).epsilon(1e-12));
}

TEST_CASE("coincident centroids are flagged") {
  BoundingBox a{0.2, 0.2, 0.6, 0.6};
  BoundingBox b{0.3, 0.3, 0.5, 0.5};
  RelativeGeometry g = relative_geometry(a, b);
  CHECK(g.coincident);
  CHECK(g.distance == 0.0);
}

TEST_CASE("strict containment wins over everything") {
  BoundingBox outer{0.0, 0.0, 1.0, 1.0};
  BoundingBox inner{0.3, 0.3, 0.6, 0.6};
  CHECK(classify_spatial(outer, inner) == 1);
  CHECK(classify_spatial(inner, outer) == 2);
}

TEST_CASE("sector boundaries resolve upward") {
  // power-of-two coordinates keep the centroid deltas exact on the boundary
  BoundingBox a{0.125, 0.375, 0.25, 0.5};  // centroid (0.1875, 0.4375)
  // directly to the right: angle exactly 0 -> first sector, never "overlap"
  BoundingBox right{0.375, 0.375, 0.5, 0.5};
  CHECK(classify_spatial(a, right) == 4);
  // straight up (image up = smaller y): angle exactly 90 -> third sector
  BoundingBox above{0.125, 0.125, 0.25, 0.25};
  CHECK(classify_spatial(a, above) == 6);
  // just shy of 90 degrees stays in the second sector
  BoundingBox almost{0.126, 0.125, 0.251, 0.25};
  CHECK(classify_spatial(a, almost) == 5);
  // exact 45-degree diagonal resolves upward into the second sector
  BoundingBox diag{0.375, 0.125, 0.5, 0.25};
  CHECK(classify_spatial(a, diag) == 5);
}

TEST_CASE("distant pairs produce no edge") {
  BoundingBox a{0.0, 0.0, 0.1, 0.1};    // centroid (0.05, 0.05)
  BoundingBox b{0.9, 0.9, 1.0, 1.0};    // centroid (0.95, 0.95)
  CHECK_FALSE(classify_spatial(a, b).has_value());
  CHECK(iou(a, b) == 0.0);
}

TEST_CASE("the ratio threshold is inclusive") {
  // centroid deltas of exactly (0.5, 0.5): distance sqrt(0.5), ratio exactly
  // 0.5 after the correctly rounded divide -> still an edge
  BoundingBox a{0.0, 0.0, 0.25, 0.25};  // centroid (0.125, 0.125)
  BoundingBox b{0.5, 0.5, 0.75, 0.75};  // centroid (0.625, 0.625)
  RelativeGeometry g = relative_geometry(a, b);
  CHECK(g.diagonal_ratio == 0.5);
  auto cls = classify_spatial(a, b);
  CHECK(cls.has_value());
  CHECK(*cls == 11);  // 315 degrees under the flipped-y convention
}

TEST_CASE("identical boxes overlap both ways") {
  BoundingBox a{0.2, 0.2, 0.5, 0.5};
  CHECK(classify_spatial(a, a) == 3);
}

TEST_CASE("coincident centroids without containment fall to overlap") {
  BoundingBox a{0.3, 0.1, 0.5, 0.9};  // tall
  BoundingBox b{0.1, 0.3, 0.7, 0.7};  // wide, same centroid (0.4, 0.5)
  CHECK(iou(a, b) <= 0.5);
  CHECK_FALSE(contains_strictly(a, b));
  CHECK_FALSE(contains_strictly(b, a));
  CHECK(classify_spatial(a, b) == 3);
  CHECK(classify_spatial(b, a) == 3);
}

TEST_CASE("classification agrees with the brute-force oracle on random pairs") {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    BoundingBox a = random_box(rng);
    BoundingBox b = random_box(rng);
    auto mine = classify_spatial(a, b);
    auto ref = oracle_classify(a, b);
    REQUIRE(mine == ref);
  }
}

TEST_CASE("antisymmetry invariants hold on random pairs") {
  Rng rng(29);
  for (int i = 0; i < 2000; ++i) {
    BoundingBox a = random_box(rng);
    BoundingBox b = random_box(rng);
    auto ab = classify_spatial(a, b);
    auto ba = classify_spatial(b, a);
    CHECK(ab.has_value() == ba.has_value());
    if (!ab || !ba) continue;
    CHECK(*ab >= 1);
    CHECK(*ab <= 11);
    if (*ab == 1) CHECK(*ba == 2);
    if (*ab == 2) CHECK(*ba == 1);
    if (*ab == 3) CHECK(*ba == 3);
    if (*ab >= 4) {
      CHECK(*ba >= 4);
      CHECK(*ba == ((*ab - 4 + 4) % 8) + 4);
    }
  }
}

}  // TEST_SUITE
