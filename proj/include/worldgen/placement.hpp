#pragma once

#include <cstdint>
#include <vector>

#include "worldgen/geometry.hpp"
#include "worldgen/partition.hpp"
#include "worldgen/scene_spec.hpp"
#include "worldgen/terrain.hpp"

namespace worldgen {

enum class Tier { Hero, Medium, Small };

const char* to_string(Tier t);

struct Placement {
  Tier tier = Tier::Hero;
  Vec2 center{};        // world meters
  double half_x = 0.0;  // footprint half extents
  double half_y = 0.0;
  double height = 0.0;  // meters
  double yaw = 0.0;     // radians
  double base_z = 0.0;  // terrain height at center

  std::array<Vec2, 4> corners() const {
    return oriented_rect(center, half_x, half_y, yaw);
  }
  std::array<Vec2, 4> dilated_corners(double r) const {
    return oriented_rect(center, half_x + r, half_y + r, yaw);
  }
  double footprint_area() const { return 4.0 * half_x * half_y; }
  Rect world_aabb() const;
};

struct PlacementSet {
  double extent = 0.0;
  std::vector<Placement> placements;
  // Occupancy grid over the extent: true = blocked by a dilated footprint.
  int grid_res = 0;
  std::vector<uint8_t> occupancy;

  bool placed(Tier t) const;
};

// Per-tier footprint side bands (meters). Hero >= medium >= small by
// construction; kept small enough that box-top navmesh islands stay a
// few percent of the walkable area.
struct TierBands {
  double hero_min = 2.5, hero_max = 4.0;
  double medium_min = 0.9, medium_max = 1.8;
  double small_min = 0.4, small_max = 0.9;
};

// Places one tier by rejection sampling. Tiers must run hero -> medium
// -> small. Candidates that overlap an existing dilated footprint,
// cover a region centroid, or break free-space connectivity are
// discarded. May place fewer than the target when space runs out.
PlacementSet place_tier(const RegionSet& rs, const HeightField& hf, Tier tier,
                        const SceneSpec& spec, const PlacementSet& existing, uint64_t seed,
                        const TierBands& bands = {});

// Greedy repair: removes the fewest small/medium placements needed to
// restore a single free-space component. Throws
// NavigabilityImpossibleError if hero placements alone disconnect space.
PlacementSet enforce_navigability(const PlacementSet& ps, const RegionSet& rs,
                                  const AgentParams& agent);

// Number of 4-connected free components in the occupancy grid.
int free_component_count(const PlacementSet& ps);
double free_component_fraction(const PlacementSet& ps);

PlacementSet empty_placement_set(double extent, int grid_res = 128);

}  // namespace worldgen
