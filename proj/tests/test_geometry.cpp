#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "worldgen/geometry.hpp"
#include "worldgen/rng.hpp"

using namespace worldgen;

static std::vector<Vec2> unit_square() {
  return {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

TEST_CASE("polygon area and centroid") {
  CHECK(polygon_area(unit_square()) == doctest::Approx(1.0));
  Vec2 c = polygon_centroid(unit_square());
  CHECK(c.x == doctest::Approx(0.5));
  CHECK(c.y == doctest::Approx(0.5));

  std::vector<Vec2> tri{{0, 0}, {4, 0}, {0, 3}};
  CHECK(polygon_area(tri) == doctest::Approx(6.0));
  Vec2 tc = polygon_centroid(tri);
  CHECK(tc.x == doctest::Approx(4.0 / 3.0));
  CHECK(tc.y == doctest::Approx(1.0));
}

TEST_CASE("point in polygon") {
  auto sq = unit_square();
  CHECK(point_in_polygon(sq, {0.5, 0.5}));
  CHECK_FALSE(point_in_polygon(sq, {1.5, 0.5}));
  CHECK_FALSE(point_in_polygon(sq, {-0.1, 0.5}));
  // Nonconvex L-shape.
  std::vector<Vec2> ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  CHECK(point_in_polygon(ell, {0.5, 1.5}));
  CHECK_FALSE(point_in_polygon(ell, {1.5, 1.5}));
}

TEST_CASE("halfplane clip halves a square") {
  auto clipped = clip_halfplane(unit_square(), {1, 0}, 0.5);  // x <= 0.5
  CHECK(polygon_area(clipped) == doctest::Approx(0.5));
  for (const auto& p : clipped) CHECK(p.x <= 0.5 + 1e-12);

  // Plane outside: polygon unchanged.
  auto all = clip_halfplane(unit_square(), {1, 0}, 2.0);
  CHECK(polygon_area(all) == doctest::Approx(1.0));
  // Plane excludes everything.
  auto none = clip_halfplane(unit_square(), {1, 0}, -1.0);
  CHECK(none.empty());
}

TEST_CASE("clip against random lines conserves area") {
  // The two halves of any straight cut must sum to the original area.
  Rng rng(99);
  for (int it = 0; it < 200; ++it) {
    double a = rng.uniform(0, 2 * 3.14159265358979);
    Vec2 n{std::cos(a), std::sin(a)};
    double c = rng.uniform(-1.0, 2.0);
    auto left = clip_halfplane(unit_square(), n, c);
    auto right = clip_halfplane(unit_square(), {-n.x, -n.y}, -c);
    double total = (left.empty() ? 0 : polygon_area(left)) +
                   (right.empty() ? 0 : polygon_area(right));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("oriented rect corners") {
  auto c = oriented_rect({1, 2}, 2, 1, 0.0);
  CHECK(c[0].x == doctest::Approx(-1.0));
  CHECK(c[2].x == doctest::Approx(3.0));
  // 90 degrees swaps the half extents.
  auto r = oriented_rect({0, 0}, 2, 1, 3.14159265358979 / 2);
  double max_x = std::max({std::abs(r[0].x), std::abs(r[1].x), std::abs(r[2].x)});
  CHECK(max_x == doctest::Approx(1.0));
}

TEST_CASE("convex overlap SAT") {
  auto a = unit_square();
  std::vector<Vec2> b{{2, 0}, {3, 0}, {3, 1}, {2, 1}};
  CHECK_FALSE(convex_overlap(a, b));
  std::vector<Vec2> c{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}};
  CHECK(convex_overlap(a, c));
  // Rotated near-miss: diamond beside a square.
  std::vector<Vec2> d{{2.1, 0.5}, {2.6, 0.0}, {3.1, 0.5}, {2.6, 1.0}};
  CHECK_FALSE(convex_overlap(a, d));
  // Containment counts as overlap.
  std::vector<Vec2> e{{0.4, 0.4}, {0.6, 0.4}, {0.6, 0.6}, {0.4, 0.6}};
  CHECK(convex_overlap(a, e));
}

TEST_CASE("rigid transform compose and rotation angle") {
  RigidTransform r1 = RigidTransform::rotation_z(0.3);
  RigidTransform r2 = RigidTransform::rotation_z(0.5);
  r2.translation = {1, 2, 3};
  RigidTransform c = r2.compose(r1);
  Vec3 p{0.7, -0.2, 1.1};
  Vec3 direct = r2.apply(r1.apply(p));
  Vec3 composed = c.apply(p);
  CHECK((direct - composed).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.rotation_angle() == doctest::Approx(0.8));
}

TEST_CASE("scale translate inverse") {
  ScaleTranslate st{2.5, {1, -2, 0.5}};
  Vec3 p{0.3, 0.9, -1.2};
  Vec3 back = st.inverse().apply(st.apply(p));
  CHECK((back - p).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("trimesh append merges parts") {
  TriMesh a;
  a.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  a.triangles = {{0, 1, 2}};
  a.part_names = {"ground"};
  a.tri_part = {0};
  TriMesh b = a;
  b.part_names = {"box"};
  a.append(b);
  CHECK(a.vertices.size() == 6);
  CHECK(a.triangles.size() == 2);
  REQUIRE(a.part_names.size() == 2);
  CHECK(a.part_names[1] == "box");
  CHECK(a.tri_part[1] == 1);
  CHECK(a.triangles[1][0] == 3);
}

TEST_CASE("aabb basics") {
  Aabb3 bb;
  CHECK(bb.empty());
  bb.expand({1, 2, 3});
  bb.expand({-1, 0, 5});
  CHECK(bb.extent().x == doctest::Approx(2.0));
  CHECK(bb.center().z == doctest::Approx(4.0));
}
