#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "worldgen/geometry.hpp"
#include "worldgen/scene_spec.hpp"

namespace worldgen {

struct NavPolygon {
  std::vector<Vec3> vertices;  // convex, CCW viewed from above
  int region_id = 0;
  double area() const;         // horizontally projected
};

struct NavMesh {
  std::vector<NavPolygon> polygons;
  // Adjacency: pairs of polygon indices sharing a full traversable edge.
  std::vector<std::pair<int, int>> adjacency;
  double cell_size = 0.0;
  double cell_height = 0.0;

  bool empty() const { return polygons.empty(); }
  double total_area() const;
  TriMesh to_mesh() const;  // polygons fan-triangulated, one part per region
};

// Recast-style bake: conservative triangle voxelization into column
// spans, walkable filtering by slope / clearance / climb, erosion by the
// agent radius, region growing, then per-region greedy rectangle
// polygonization. Walkable islands smaller than min_region_area are
// culled. Returns an empty NavMesh when no walkable surface remains.
NavMesh bake_navmesh(const TriMesh& mesh, const AgentParams& agent, double cell_size,
                     double cell_height = 0.2, double min_region_area = 0.5);

// Connected components of the adjacency graph with summed projected
// areas, sorted descending by area.
std::vector<std::pair<int, double>> connectivity_components(const NavMesh& nm);

void export_navmesh_obj(const NavMesh& nm, const std::string& path);
void export_navmesh_json(const NavMesh& nm, const std::string& path);

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // empty or same size as points, unit length

  bool has_normals() const { return !normals.empty(); }
};

// Area-weighted uniform surface sampling with triangle-plane normals.
PointCloud sample_surface(const TriMesh& mesh, int count, uint64_t seed);

// Greedy farthest-point subset, seeded from point index 0.
PointCloud fps(const PointCloud& pc, int k);

// Deterministic seed derived from the vertex data, so identical meshes
// always sample identical clouds.
uint64_t mesh_content_seed(const TriMesh& mesh);

}  // namespace worldgen
