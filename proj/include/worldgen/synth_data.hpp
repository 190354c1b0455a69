#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "worldgen/blockout.hpp"
#include "worldgen/decompose.hpp"
#include "worldgen/geometry.hpp"
#include "worldgen/navmesh.hpp"
#include "worldgen/partition.hpp"
#include "worldgen/scene_spec.hpp"

namespace worldgen {

// Synthetic compositional scene: assets arranged in a square grid on an
// explicit ground plane, with exact per-part ground truth.
struct GridSceneSpec {
  int grid = 2;          // cells per side: 2 or 3
  double spacing = 1.0;  // meters of clearance between unit-box cells
  std::vector<TriMesh> assets;
  bool sample_with_replacement = false;
  uint64_t seed = 0;
};

// Normalizes each asset to a unit box resting at z = 0, places one per
// grid cell, and adds a ground quad. gt_parts holds one part per object
// plus the ground, built with the same centering decompose_scene uses,
// so a lossless decomposition reproduces them bit-exactly.
void compose_grid_scene(const GridSceneSpec& gs, TriMesh& scene, PartSet& gt_parts);

struct DegradeParams {
  double floater_prob = 1.0;  // chance each artifact family applies
  double mask_prob = 1.0;
  double break_prob = 1.0;

  int floater_count = 3;        // detached blobs added near the surface
  double floater_size = 0.02;   // blob radius, fraction of bbox diagonal
  double floater_offset = 0.05; // surface offset, fraction of diagonal

  int mask_spheres = 2;       // triangle-deleting spheres
  double mask_radius = 0.1;   // fraction of diagonal

  int break_patches = 2;      // vertex-jitter patches
  double break_radius = 0.1;  // fraction of diagonal
  double break_amp = 0.01;    // max per-axis jitter, fraction of diagonal

  double max_removal = 0.5;  // hard cap on deleted triangle fraction
};

// Simulated reconstruction artifacts: floaters, masked-out regions,
// broken surfaces. Deterministic in seed; deletes at most
// max_removal * triangle_count triangles.
TriMesh degrade_mesh(const TriMesh& m, uint64_t seed, const DegradeParams& params = {});

// Full generation pipeline for one scene: terrain, partition, tiered
// placement, navigability repair, footprint smoothing, blockout
// assembly, navmesh bake.
struct GeneratedScene {
  SceneSpec spec;
  RegionSet regions;
  PlacementSet placements;
  Blockout blockout;
  NavMesh navmesh;
  double navmesh_cell_size = 0.0;
};

GeneratedScene generate_scene(const SceneSpec& spec);

// Writes the fixed per-scene layout (scene.obj, parts.gltf,
// navmesh.obj, navmesh.json, depth.png, depth.json, manifest.json).
void write_scene_dir(const std::string& dir, const GeneratedScene& g,
                     int depth_resolution = 256);

struct BenchmarkConfig {
  int n_scenes = 50;
  int objects_min = 10;
  int objects_max = 30;
  int depth_resolution = 256;
  int jobs = 1;
};

// Emits one directory per scene (scene.obj, navmesh.obj, navmesh.json,
// depth.png, depth.json, parts.gltf, manifest.json) plus a top-level
// dataset manifest. Deterministic in (template, seed): reruns are
// byte-identical. Manifests are written via write-then-rename.
void build_benchmark(const std::string& out_dir, const SceneSpec& spec_template,
                     uint64_t seed, const BenchmarkConfig& cfg = {});

}  // namespace worldgen
