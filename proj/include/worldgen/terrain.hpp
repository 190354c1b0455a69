#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "worldgen/geometry.hpp"
#include "worldgen/scene_spec.hpp"

namespace worldgen {

// Regular N x N elevation grid. Cell (i, j) stores the height at world
// position origin + (i, j) * cell_size; row-major with i along x.
struct HeightField {
  int resolution = 0;
  double cell_size = 0.0;
  Vec2 origin{};
  std::vector<double> heights;

  double at(int i, int j) const { return heights[(size_t)j * resolution + i]; }
  double& at(int i, int j) { return heights[(size_t)j * resolution + i]; }
  double extent() const { return cell_size * (resolution - 1); }
};

// Axis-aligned world-space rectangle.
struct Rect {
  Vec2 min{}, max{};
  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

HeightField generate_heightfield(const SceneSpec& spec, uint64_t rng_seed);

// Bilinear interpolation; throws OutOfBoundsError outside the grid.
double sample_height(const HeightField& hf, double x, double y);

// Flattens the terrain under each footprint (dilated one cell) to the
// footprint's mean height, cosine-blended into the surroundings over a
// two-cell margin. Cells beyond the margin are untouched.
HeightField smooth_under_footprints(const HeightField& hf, const std::vector<Rect>& footprints);

// Gradient-noise primitive used by terrain and the noise partition
// strategy. Output roughly in [-1, 1].
double perlin2(double x, double y, uint64_t seed);
double fbm2(double x, double y, uint64_t seed, int octaves, double lacunarity,
            double persistence);

// Triangulates the grid: two triangles per cell, single "ground" part label.
TriMesh heightfield_to_mesh(const HeightField& hf);

// Debug export: height linearly mapped over elevation_range to 16-bit gray.
void write_heightfield_png(const HeightField& hf, double elev_min, double elev_max,
                           const std::string& path);

}  // namespace worldgen
