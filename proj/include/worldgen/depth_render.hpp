#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "worldgen/blockout.hpp"
#include "worldgen/geometry.hpp"

namespace worldgen {

struct DepthMap {
  int width = 0, height = 0;
  std::vector<double> depth;         // meters along the view ray; +inf = background
  std::vector<uint8_t> terrain_mask;  // true where the nearest hit is ground

  double at(int x, int y) const { return depth[(size_t)y * width + x]; }
  bool is_terrain(int x, int y) const { return terrain_mask[(size_t)y * width + x] != 0; }
};

// Camera description recorded alongside the render so analytic checks
// and the PNG sidecar can reproduce the projection.
struct DepthCamera {
  Vec3 forward, right, up;   // orthonormal view frame
  double frame_min_u = 0, frame_max_u = 0;
  double frame_min_v = 0, frame_max_v = 0;
  double near_plane = 0;     // scalar offset: depth = dot(p, forward) - near_plane
};

// Orthographic render at a fixed 45-degree camera elevation. The frame
// encloses the scene bounds with a 5% margin. Top-left fill rule; equal
// depths resolve to the lower triangle index.
DepthMap render_depth(const Blockout& b, double azimuth, int resolution,
                      DepthCamera* camera_out = nullptr);

// Multiplicative Gaussian noise on non-terrain, non-background pixels:
// depth *= (1 + eps), eps ~ N(0, sigma_rel), clamped positive. Terrain
// and background pixels are untouched.
DepthMap perturb_depth(const DepthMap& dm, double sigma_rel, uint64_t seed);

// 16-bit grayscale PNG; finite depths map linearly to [1,65535] over the
// finite range, background = 0. Mapping, camera, and noise parameters go
// into a sidecar JSON next to the image.
void write_depth_png(const DepthMap& dm, const std::string& path,
                     const DepthCamera* camera = nullptr, double sigma_rel = 0.0,
                     uint64_t seed = 0, double azimuth = 0.0);

DepthMap read_depth_png(const std::string& png_path);

// Of 8 canonical azimuths, the one whose render occludes the fewest
// placements (a placement counts as visible when the pixel at its
// projected top center is non-terrain).
double pick_azimuth(const Blockout& b, int resolution = 256);

}  // namespace worldgen
