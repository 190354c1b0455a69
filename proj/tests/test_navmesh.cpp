#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "worldgen/errors.hpp"
#include "worldgen/navmesh.hpp"
#include "worldgen/rng.hpp"

using namespace worldgen;

namespace {

// Flat square plate [0,s]^2 at height z.
TriMesh plate(double s, double z) {
  TriMesh m;
  m.vertices = {{0, 0, z}, {s, 0, z}, {s, s, z}, {0, s, z}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

TriMesh box_at(double cx, double cy, double half, double z0, double z1) {
  TriMesh m;
  for (int k = 0; k < 8; ++k)
    m.vertices.push_back({cx + ((k & 1) ? half : -half), cy + ((k & 2) ? half : -half),
                          (k & 4) ? z1 : z0});
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 5}, {0, 5, 4},
                 {1, 3, 7}, {1, 7, 5}, {3, 2, 6}, {3, 6, 7}, {2, 0, 4}, {2, 4, 6}};
  return m;
}

AgentParams default_agent() { return {}; }

}  // namespace

TEST_CASE("flat plate bakes to one eroded component") {
  TriMesh m = plate(20.0, 0.0);
  AgentParams agent = default_agent();
  NavMesh nm = bake_navmesh(m, agent, 0.25);
  REQUIRE(!nm.empty());
  auto comps = connectivity_components(nm);
  REQUIRE(comps.size() == 1);
  // Erosion removes ceil(r / cell) = 2 cells per side: expected area
  // (20 - 2*0.5)^2 within a one-cell ring tolerance.
  double expect = 19.0 * 19.0;
  double ring = 4 * 19.0 * 0.25 * 2;
  CHECK(std::abs(nm.total_area() - expect) <= ring);

  // Every polygon stays inside the plate and at its height.
  for (const auto& poly : nm.polygons)
    for (const auto& v : poly.vertices) {
      REQUIRE(v.x >= -1e-9);
      REQUIRE(v.x <= 20.0 + 1e-9);
      REQUIRE(v.z == doctest::Approx(0.0).epsilon(0.25));
    }
}

TEST_CASE("steep slope is rejected by the slope filter") {
  // 60-degree ramp: z = sqrt(3) * x over x in [0,5]; walkable with a
  // 65-degree agent, not with the default 45.
  TriMesh ramp;
  double k = std::tan(60.0 * 3.14159265358979 / 180.0);
  ramp.vertices = {{0, 0, 0}, {5, 0, 5 * k}, {5, 5, 5 * k}, {0, 5, 0}};
  ramp.triangles = {{0, 1, 2}, {0, 2, 3}};
  AgentParams agent = default_agent();
  NavMesh none = bake_navmesh(ramp, agent, 0.25);
  CHECK(none.empty());
  agent.max_slope_deg = 65.0;
  agent.max_climb = 10.0;  // spans quantize steeply along the ramp
  NavMesh some = bake_navmesh(ramp, agent, 0.25);
  CHECK(!some.empty());
}

TEST_CASE("step height separates or joins a platform") {
  AgentParams agent = default_agent();
  TriMesh low = plate(10.0, 0.0);
  low.append(box_at(5.0, 5.0, 1.5, 0.0, 0.3));  // climbable: 0.3 < 0.4
  auto climbable = connectivity_components(bake_navmesh(low, agent, 0.2));
  CHECK(climbable.size() == 1);

  TriMesh high = plate(10.0, 0.0);
  high.append(box_at(5.0, 5.0, 1.5, 0.0, 1.2));  // too tall to step onto
  auto split = connectivity_components(bake_navmesh(high, agent, 0.2));
  CHECK(split.size() == 2);
}

TEST_CASE("clearance filter removes space under a low ceiling") {
  AgentParams agent = default_agent();  // needs 1.8 m headroom
  TriMesh m = plate(10.0, 0.0);
  m.append(plate(10.0, 1.0));  // ceiling at 1 m over everything
  NavMesh nm = bake_navmesh(m, agent, 0.25);
  // Only the ceiling top remains walkable; the floor is blocked.
  for (const auto& poly : nm.polygons)
    for (const auto& v : poly.vertices) REQUIRE(v.z > 0.5);
}

TEST_CASE("min region area culls small islands") {
  TriMesh m = plate(10.0, 0.0);
  m.append(box_at(5.0, 5.0, 0.45, 0.0, 2.0));  // top 0.9x0.9 < 1 m2 after erosion
  AgentParams agent = default_agent();
  NavMesh nm = bake_navmesh(m, agent, 0.1, 0.2, 0.5);
  auto comps = connectivity_components(nm);
  CHECK(comps.size() == 1);  // island culled, floor survives (with a hole)
}

TEST_CASE("no walkable surface yields an empty navmesh") {
  TriMesh wall;
  wall.vertices = {{0, 0, 0}, {5, 0, 0}, {5, 0, 5}, {0, 0, 5}};
  wall.triangles = {{0, 1, 2}, {0, 2, 3}};
  NavMesh nm = bake_navmesh(wall, default_agent(), 0.25);
  CHECK(nm.empty());
  CHECK(nm.total_area() == 0.0);
  CHECK(connectivity_components(nm).empty());
}

TEST_CASE("adjacent polygons share an edge in the grid metric") {
  NavMesh nm = bake_navmesh(plate(8.0, 0.0), default_agent(), 0.25);
  for (auto [a, b] : nm.adjacency) {
    REQUIRE(a >= 0);
    REQUIRE(a < (int)nm.polygons.size());
    REQUIRE(b > a);
    // Rectangles of one region level: their xy bounding boxes must touch.
    Aabb3 ba, bb;
    for (const auto& v : nm.polygons[a].vertices) ba.expand(v);
    for (const auto& v : nm.polygons[b].vertices) bb.expand(v);
    REQUIRE(ba.overlaps(bb, 1e-9));
  }
}

TEST_CASE("bake is deterministic") {
  TriMesh m = plate(12.0, 0.0);
  m.append(box_at(4.0, 4.0, 1.0, 0.0, 2.0));
  NavMesh a = bake_navmesh(m, default_agent(), 0.2);
  NavMesh b = bake_navmesh(m, default_agent(), 0.2);
  REQUIRE(a.polygons.size() == b.polygons.size());
  for (size_t i = 0; i < a.polygons.size(); ++i) {
    REQUIRE(a.polygons[i].vertices.size() == b.polygons[i].vertices.size());
    for (size_t k = 0; k < a.polygons[i].vertices.size(); ++k)
      REQUIRE(a.polygons[i].vertices[k] == b.polygons[i].vertices[k]);
  }
  CHECK(a.adjacency == b.adjacency);
}

TEST_CASE("surface sampling lands on the mesh, area weighted") {
  // Two triangles with area ratio 4:1; counts follow a binomial split.
  TriMesh m;
  m.vertices = {{0, 0, 0}, {4, 0, 0}, {0, 2, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}};
  m.triangles = {{0, 1, 2}, {3, 4, 5}};
  const int n = 20000;
  PointCloud pc = sample_surface(m, n, 9);
  REQUIRE((int)pc.points.size() == n);
  REQUIRE(pc.has_normals());
  int big = 0;
  for (size_t i = 0; i < pc.points.size(); ++i) {
    const Vec3& p = pc.points[i];
    REQUIRE(p.z == 0.0);  // both triangles lie in z = 0
    bool in_big = p.x <= 4.0 + 1e-9 && p.x >= -1e-9;
    bool in_small = p.x >= 5.0 - 1e-9 && p.x <= 6.0 + 1e-9;
    REQUIRE((in_big || in_small));
    big += in_big;
    REQUIRE(pc.normals[i].z == doctest::Approx(1.0));
  }
  // p = 4/4.5 = 8/9; sd ~ 0.0022; allow 5 sigma.
  CHECK((double)big / n == doctest::Approx(8.0 / 9.0).epsilon(0.015));
}

TEST_CASE("sampling determinism and error cases") {
  TriMesh m = plate(3.0, 0.5);
  PointCloud a = sample_surface(m, 100, 5), b = sample_surface(m, 100, 5);
  PointCloud c = sample_surface(m, 100, 6);
  REQUIRE(a.points.size() == b.points.size());
  bool same = true, diff = false;
  for (size_t i = 0; i < a.points.size(); ++i) {
    same = same && a.points[i] == b.points[i];
    diff = diff || !(a.points[i] == c.points[i]);
  }
  CHECK(same);
  CHECK(diff);

  TriMesh degenerate;
  degenerate.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  degenerate.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(sample_surface(degenerate, 10, 1), ZeroAreaError);
}

TEST_CASE("farthest point sampling maximizes the minimum gap") {
  Rng rng(77);
  PointCloud pc;
  for (int i = 0; i < 60; ++i)
    pc.points.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
  PointCloud sub = fps(pc, 8);
  REQUIRE(sub.points.size() == 8);
  CHECK(sub.points[0] == pc.points[0]);

  // Oracle: replay the greedy rule directly.
  std::vector<int> chosen{0};
  std::vector<double> d(pc.points.size(), 1e300);
  for (int step = 1; step < 8; ++step) {
    int last = chosen.back();
    for (size_t i = 0; i < pc.points.size(); ++i)
      d[i] = std::min(d[i], (pc.points[i] - pc.points[last]).norm2());
    int far = 0;
    for (size_t i = 1; i < pc.points.size(); ++i)
      if (d[i] > d[far]) far = (int)i;
    chosen.push_back(far);
  }
  for (int i = 0; i < 8; ++i) REQUIRE(sub.points[i] == pc.points[chosen[i]]);

  CHECK_THROWS_AS(fps(pc, 0), BadKError);
  CHECK_THROWS_AS(fps(pc, 61), BadKError);
}

TEST_CASE("mesh content seed keys on geometry") {
  TriMesh a = plate(5.0, 1.0), b = plate(5.0, 1.0);
  CHECK(mesh_content_seed(a) == mesh_content_seed(b));
  b.vertices[0].x += 1e-12;
  CHECK(mesh_content_seed(a) != mesh_content_seed(b));
  TriMesh c = plate(5.0, 1.0);
  std::swap(c.triangles[0], c.triangles[1]);
  CHECK(mesh_content_seed(a) != mesh_content_seed(c));
}

TEST_CASE("navmesh exports round out the bake") {
  NavMesh nm = bake_navmesh(plate(6.0, 0.0), default_agent(), 0.25);
  export_navmesh_obj(nm, "/tmp/wg_nm.obj");
  export_navmesh_json(nm, "/tmp/wg_nm.json");
  TriMesh tri = nm.to_mesh();
  CHECK(tri.triangles.size() >= nm.polygons.size());
  // Fan triangulation preserves total area.
  CHECK(tri.total_area() == doctest::Approx(nm.total_area()).epsilon(1e-9));
}
