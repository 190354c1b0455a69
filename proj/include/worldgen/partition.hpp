#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "worldgen/geometry.hpp"
#include "worldgen/scene_spec.hpp"

namespace worldgen {

enum class RegionRole { Cluster, Open, Transition };

struct Region {
  int id = 0;
  std::vector<Vec2> polygon;  // simple, CCW
  RegionRole role = RegionRole::Transition;
};

// Regions covering the square [0, extent]^2. For the tiling strategies
// (bsp, grid, kdtree, voronoi) the regions tile the extent exactly; for
// the mask strategies (noise, drunkard) a coarse grid of regions is
// overlaid and the carved walkable corridor is kept as a cell mask.
struct RegionSet {
  double extent = 0.0;
  std::vector<Region> regions;
  // Mask grid (noise/drunkard only): mask_res^2 cells, true = walkable.
  int mask_res = 0;
  std::vector<uint8_t> walkable_mask;

  bool has_mask() const { return mask_res > 0; }
  bool mask_at(int i, int j) const { return walkable_mask[(size_t)j * mask_res + i] != 0; }
};

RegionSet make_partition(double extent, PartitionStrategy strategy,
                         const std::map<std::string, double>& params, int region_count_hint,
                         uint64_t seed);

// Labels regions cluster/open/transition. The cluster fraction follows
// the density tier (~0.3 / ~0.5 / ~0.7); at least one region stays open.
RegionSet assign_roles(const RegionSet& rs, const SceneSpec& spec, uint64_t seed);

// Debug export of the region polygons (role-colored).
void write_regions_svg(const RegionSet& rs, const std::string& path);

}  // namespace worldgen
