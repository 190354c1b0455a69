#pragma once

#include <string>
#include <vector>

#include "worldgen/geometry.hpp"

namespace worldgen {

enum class PartLabel { Ground, Object, OverlayMerged };

struct Part {
  TriMesh mesh;        // stored centered at the origin
  Vec3 pose;           // centroid translation back into scene space
  PartLabel label = PartLabel::Object;
  double area = 0.0;          // surface area
  double volume_proxy = 0.0;  // AABB volume
  int vertex_count = 0;

  TriMesh world_mesh() const;  // mesh with pose applied
};

struct PartSet {
  std::vector<Part> parts;
  double ground_confidence = 0.0;  // projected-area share of the ground part
  int ground_index = -1;           // -1 when ground detection failed
};

struct DecomposeFilters {
  int min_parts = 2;
  int max_parts = 64;
  double max_imbalance_ratio = 100.0;  // largest/smallest object vertex ratio
  double min_ground_confidence = 0.3;
};

struct DecomposeConfig {
  double weld_eps = -1.0;           // < 0: 1e-4 of the scene diagonal
  double small_part_vertex_fraction = 0.005;
  double overlay_thickness = 0.05;  // meters
  DecomposeFilters filters;
};

// Heuristic decomposition: weld -> connected components -> ground
// detection -> overlay merge -> iterative small-part merge.
PartSet decompose_scene(const TriMesh& mesh, const DecomposeConfig& cfg = {});

struct FilterVerdict {
  bool accept = true;
  std::vector<std::string> reasons;  // failed constraints
};

FilterVerdict quality_filter(const PartSet& ps, const DecomposeConfig& cfg = {});

// Parts sorted by descending contact count (ties: larger projected area,
// then lower id). degree(i) counts parts within contact_eps of part i.
std::vector<int> connectivity_degree_order(const PartSet& ps, double contact_eps);
std::vector<int> part_contact_degrees(const PartSet& ps, double contact_eps);

// Top pivot_count parts by connectivity order become pivots; the rest
// are merged and re-split by connected-component analysis.
void pivot_remainder_split(const PartSet& ps, int pivot_count, double contact_eps,
                           std::vector<int>& pivot_ids, PartSet& remainder);

// Centers a world-space mesh at its vertex centroid and records the
// centroid as the pose; the same construction decompose_scene uses.
Part part_from_world_mesh(TriMesh world, PartLabel label);

// Exact distance between two triangles.
double triangle_distance(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                         const Vec3& b1, const Vec3& b2);

// Welds vertices within eps (grid snap) and drops duplicate faces.
TriMesh weld_vertices(const TriMesh& mesh, double eps);

// Splits a mesh into vertex-connected components.
std::vector<TriMesh> connected_components(const TriMesh& mesh);

void write_decompose_report(const PartSet& ps, const DecomposeConfig& cfg,
                            const std::string& path);

}  // namespace worldgen
