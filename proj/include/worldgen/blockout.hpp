#pragma once

#include <string>
#include <vector>

#include "worldgen/geometry.hpp"
#include "worldgen/placement.hpp"
#include "worldgen/terrain.hpp"

namespace worldgen {

// Ground mesh plus posed boxes; the structural scaffold of a scene.
// Keeps the heightfield and placements so declarative edits can re-flow
// box bases after terrain changes.
struct Blockout {
  HeightField heightfield;
  std::vector<Placement> placements;  // box i corresponds to placements[i]
  TriMesh ground;
  std::vector<TriMesh> boxes;
  Aabb3 bounds;

  // Single labeled mesh: part 0 = "ground", then one part per box.
  TriMesh combined() const;
};

struct Edit {
  enum class Kind { RemoveBox, SetBoxHeight, OffsetTerrain };
  Kind kind = Kind::RemoveBox;
  int box_id = -1;        // RemoveBox / SetBoxHeight
  double height = 0.0;    // SetBoxHeight
  Rect rect{};            // OffsetTerrain
  double dz = 0.0;        // OffsetTerrain
};

using EditScript = std::vector<Edit>;

Blockout assemble_blockout(const HeightField& hf, const PlacementSet& ps);

// Applies edits in order. Terrain offsets re-flow the base height of
// boxes sitting on affected cells. Throws UnknownIdError for bad ids.
Blockout apply_edits(const Blockout& b, const EditScript& edits);

EditScript parse_edit_script(const std::string& json_text);

// One uniform scale + translation applied to both meshes: the scene fits
// inside [-1,1]^3 (2% margin) and the navmesh ground-plane centroid maps
// to the origin. Returns the transform for inversion.
ScaleTranslate normalize_scene(TriMesh& scene, TriMesh& navmesh);

// Inference-mode variant: scale comes from the blockout bounds when no
// ground-truth scene mesh exists; translation from the navmesh ground
// plane as usual.
ScaleTranslate normalize_with_reference(TriMesh& navmesh, const Aabb3& reference_bounds);

// Area-weighted centroid of the largest near-horizontal polygon cluster
// in the lowest elevation band; used as the normalization anchor.
Vec3 ground_plane_centroid(const TriMesh& navmesh);

}  // namespace worldgen
