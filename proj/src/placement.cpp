#include "worldgen/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "worldgen/errors.hpp"
#include "worldgen/rng.hpp"

namespace worldgen {

const char* to_string(Tier t) {
  switch (t) {
    case Tier::Hero: return "hero";
    case Tier::Medium: return "medium";
    case Tier::Small: return "small";
  }
  return "?";
}

Rect Placement::world_aabb() const {
  Rect r{{1e300, 1e300}, {-1e300, -1e300}};
  for (const auto& c : corners()) {
    r.min.x = std::min(r.min.x, c.x); r.min.y = std::min(r.min.y, c.y);
    r.max.x = std::max(r.max.x, c.x); r.max.y = std::max(r.max.y, c.y);
  }
  return r;
}

bool PlacementSet::placed(Tier t) const {
  return std::any_of(placements.begin(), placements.end(),
                     [t](const Placement& p) { return p.tier == t; });
}

PlacementSet empty_placement_set(double extent, int grid_res) {
  PlacementSet ps;
  ps.extent = extent;
  ps.grid_res = grid_res;
  ps.occupancy.assign((size_t)grid_res * grid_res, 0);
  return ps;
}

namespace {

void stamp_footprint(PlacementSet& ps, const Placement& p, double dilation, uint8_t value) {
  int res = ps.grid_res;
  double cs = ps.extent / res;
  auto c4 = p.dilated_corners(dilation);
  std::vector<Vec2> poly(c4.begin(), c4.end());
  Rect bb{{1e300, 1e300}, {-1e300, -1e300}};
  for (const auto& c : poly) {
    bb.min.x = std::min(bb.min.x, c.x); bb.min.y = std::min(bb.min.y, c.y);
    bb.max.x = std::max(bb.max.x, c.x); bb.max.y = std::max(bb.max.y, c.y);
  }
  int i0 = std::max(0, (int)std::floor(bb.min.x / cs));
  int i1 = std::min(res - 1, (int)std::floor(bb.max.x / cs));
  int j0 = std::max(0, (int)std::floor(bb.min.y / cs));
  int j1 = std::min(res - 1, (int)std::floor(bb.max.y / cs));
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      Vec2 center{(i + 0.5) * cs, (j + 0.5) * cs};
      if (point_in_polygon(poly, center))
        ps.occupancy[(size_t)j * res + i] = value;
    }
}

void rebuild_occupancy(PlacementSet& ps, double dilation) {
  std::fill(ps.occupancy.begin(), ps.occupancy.end(), 0);
  for (const auto& p : ps.placements) stamp_footprint(ps, p, dilation, 1);
}

int count_free_components(const std::vector<uint8_t>& occ, int res, int* largest = nullptr) {
  std::vector<uint8_t> seen(occ.size(), 0);
  int comps = 0, best = 0;
  for (int start = 0; start < res * res; ++start) {
    if (occ[start] || seen[start]) continue;
    ++comps;
    int size = 0;
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      int c = q.front(); q.pop();
      ++size;
      int ci = c % res, cj = c / res;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int ni = ci + di[k], nj = cj + dj[k];
        if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
        int nidx = nj * res + ni;
        if (!occ[nidx] && !seen[nidx]) {
          seen[nidx] = 1;
          q.push(nidx);
        }
      }
    }
    best = std::max(best, size);
  }
  if (largest) *largest = best;
  return comps;
}

struct TierConfig {
  double size_min, size_max;   // footprint side band
  double height_min, height_max;
  int target;
};

TierConfig tier_config(Tier tier, const SceneSpec& spec, const TierBands& bands) {
  double vscale = 0.5 + spec.verticality;
  switch (tier) {
    case Tier::Hero:
      return {bands.hero_min, bands.hero_max, 4.0 * vscale, 12.0 * vscale,
              spec.density.hero_count};
    case Tier::Medium:
      return {bands.medium_min, bands.medium_max, 1.5, 4.0, spec.density.medium_count};
    case Tier::Small:
      return {bands.small_min, bands.small_max, 0.3, 1.5, spec.density.small_count};
  }
  return {};
}

std::vector<int> centroid_cells(const RegionSet& rs, int res, double extent) {
  std::vector<int> cells;
  double cs = extent / res;
  for (const auto& r : rs.regions) {
    Vec2 c = polygon_centroid(r.polygon);
    int i = std::clamp((int)(c.x / cs), 0, res - 1);
    int j = std::clamp((int)(c.y / cs), 0, res - 1);
    cells.push_back(j * res + i);
  }
  return cells;
}

bool centroids_connected(const std::vector<uint8_t>& occ, int res,
                         const std::vector<int>& centroids) {
  if (centroids.empty()) return true;
  int seed = -1;
  for (int c : centroids)
    if (!occ[c]) { seed = c; break; }
  // All centroid cells must be free and mutually reachable.
  for (int c : centroids)
    if (occ[c]) return false;
  if (seed < 0) return false;
  std::vector<uint8_t> seen(occ.size(), 0);
  std::queue<int> q;
  q.push(seed);
  seen[seed] = 1;
  while (!q.empty()) {
    int c = q.front(); q.pop();
    int ci = c % res, cj = c / res;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int ni = ci + di[k], nj = cj + dj[k];
      if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
      int nidx = nj * res + ni;
      if (!occ[nidx] && !seen[nidx]) {
        seen[nidx] = 1;
        q.push(nidx);
      }
    }
  }
  for (int c : centroids)
    if (!seen[c]) return false;
  return true;
}

}  // namespace

int free_component_count(const PlacementSet& ps) {
  return count_free_components(ps.occupancy, ps.grid_res);
}

double free_component_fraction(const PlacementSet& ps) {
  int largest = 0;
  count_free_components(ps.occupancy, ps.grid_res, &largest);
  return (double)largest / ((double)ps.grid_res * ps.grid_res);
}

PlacementSet place_tier(const RegionSet& rs, const HeightField& hf, Tier tier,
                        const SceneSpec& spec, const PlacementSet& existing, uint64_t seed,
                        const TierBands& bands) {
  if (tier == Tier::Medium && !existing.placed(Tier::Hero) && spec.density.hero_count > 0)
    throw TierOrderError("place_tier: medium tier before hero tier");
  if (tier == Tier::Small &&
      ((!existing.placed(Tier::Medium) && spec.density.medium_count > 0) ||
       (!existing.placed(Tier::Hero) && spec.density.hero_count > 0)))
    throw TierOrderError("place_tier: small tier before earlier tiers");
  if (tier == Tier::Hero && (existing.placed(Tier::Medium) || existing.placed(Tier::Small)))
    throw TierOrderError("place_tier: hero tier after later tiers");

  TierConfig cfg = tier_config(tier, spec, bands);
  PlacementSet ps = existing;
  if (ps.grid_res == 0) ps = empty_placement_set(spec.extent);
  if (cfg.target == 0) return ps;

  const double dilation = spec.agent.radius + ps.extent / ps.grid_res;
  Rng rng(hash_combine(hash_combine(seed, spec.seed), (uint64_t)tier * 31 + 7));

  std::vector<const Region*> clusters;
  for (const auto& r : rs.regions)
    if (r.role == RegionRole::Cluster) clusters.push_back(&r);
  if (clusters.empty())
    for (const auto& r : rs.regions) clusters.push_back(&r);

  std::vector<Placement> heroes;
  for (const auto& p : existing.placements)
    if (p.tier == Tier::Hero) heroes.push_back(p);

  // Seeded clustering centers for the small tier.
  std::vector<Vec2> small_centers;
  if (tier == Tier::Small) {
    int n_centers = std::max(1, cfg.target / 6);
    for (int i = 0; i < n_centers; ++i)
      small_centers.push_back({rng.uniform(0.05, 0.95) * spec.extent,
                               rng.uniform(0.05, 0.95) * spec.extent});
  }

  const std::vector<int> centroids = centroid_cells(rs, ps.grid_res, ps.extent);
  rebuild_occupancy(ps, dilation);

  int placed = 0;
  int64_t max_attempts = (int64_t)cfg.target * 50;
  const double margin = cfg.size_max;  // keep boxes off the boundary

  for (int64_t attempt = 0; attempt < max_attempts && placed < cfg.target; ++attempt) {
    Placement cand;
    cand.tier = tier;
    cand.half_x = 0.5 * rng.uniform(cfg.size_min, cfg.size_max);
    cand.half_y = 0.5 * rng.uniform(cfg.size_min, cfg.size_max);
    cand.height = rng.uniform(cfg.height_min, cfg.height_max);
    cand.yaw = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    if (spec.regularity >= 0.7) {
      const double step = 15.0 * 3.14159265358979323846 / 180.0;
      cand.yaw = std::round(cand.yaw / step) * step;
    }

    if (tier == Tier::Hero) {
      const Region* r = clusters[(size_t)rng.uniform_int(0, (int64_t)clusters.size() - 1)];
      Rect bb{{1e300, 1e300}, {-1e300, -1e300}};
      for (const auto& v : r->polygon) {
        bb.min.x = std::min(bb.min.x, v.x); bb.min.y = std::min(bb.min.y, v.y);
        bb.max.x = std::max(bb.max.x, v.x); bb.max.y = std::max(bb.max.y, v.y);
      }
      cand.center = {rng.uniform(bb.min.x, bb.max.x), rng.uniform(bb.min.y, bb.max.y)};
      if (!point_in_polygon(r->polygon, cand.center)) continue;
    } else if (tier == Tier::Medium && !heroes.empty()) {
      // Annulus of 2-8 m around a hero.
      const Placement& h = heroes[(size_t)rng.uniform_int(0, (int64_t)heroes.size() - 1)];
      double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      double rad = rng.uniform(2.0, 8.0) + std::max(h.half_x, h.half_y);
      cand.center = {h.center.x + rad * std::cos(ang), h.center.y + rad * std::sin(ang)};
    } else if (tier == Tier::Small && !small_centers.empty() && rng.uniform01() < 0.7) {
      const Vec2& c = small_centers[(size_t)rng.uniform_int(0, (int64_t)small_centers.size() - 1)];
      cand.center = {c.x + rng.normal() * 3.0, c.y + rng.normal() * 3.0};
    } else {
      cand.center = {rng.uniform(0.0, spec.extent), rng.uniform(0.0, spec.extent)};
    }

    if (cand.center.x < margin || cand.center.y < margin ||
        cand.center.x > spec.extent - margin || cand.center.y > spec.extent - margin)
      continue;

    // Mask strategies: structures live on the un-carved area.
    if (rs.has_mask()) {
      int mi = std::clamp((int)(cand.center.x / rs.extent * rs.mask_res), 0, rs.mask_res - 1);
      int mj = std::clamp((int)(cand.center.y / rs.extent * rs.mask_res), 0, rs.mask_res - 1);
      if (rs.mask_at(mi, mj)) continue;
    }

    // Dilated-overlap rejection against all existing placements.
    auto cc = cand.dilated_corners(spec.agent.radius);
    std::vector<Vec2> cpoly(cc.begin(), cc.end());
    bool overlap = false;
    for (const auto& p : ps.placements) {
      auto pc = p.dilated_corners(spec.agent.radius);
      std::vector<Vec2> ppoly(pc.begin(), pc.end());
      if (convex_overlap(cpoly, ppoly)) { overlap = true; break; }
    }
    if (overlap) continue;

    // Connectivity: stamping must keep one free component that contains
    // every region centroid cell.
    PlacementSet trial = ps;
    stamp_footprint(trial, cand, dilation, 1);
    int largest = 0;
    int comps = count_free_components(trial.occupancy, trial.grid_res, &largest);
    if (comps != 1) continue;
    if (!centroids_connected(trial.occupancy, trial.grid_res, centroids)) continue;
    if (largest < (int)(0.6 * trial.grid_res * trial.grid_res)) continue;

    cand.base_z = sample_height(hf, cand.center.x, cand.center.y);
    ps.placements.push_back(cand);
    ps.occupancy = trial.occupancy;
    ++placed;
  }

  return ps;
}

PlacementSet enforce_navigability(const PlacementSet& ps, const RegionSet& rs,
                                  const AgentParams& agent) {
  PlacementSet out = ps;
  const double dilation = agent.radius + out.extent / out.grid_res;
  rebuild_occupancy(out, dilation);
  if (count_free_components(out.occupancy, out.grid_res) == 1) return out;

  // Greedy: repeatedly drop the non-hero placement whose removal shrinks
  // the component count the most (largest footprint breaks ties).
  while (count_free_components(out.occupancy, out.grid_res) > 1) {
    int best_idx = -1, best_comps = std::numeric_limits<int>::max();
    double best_area = -1.0;
    for (size_t i = 0; i < out.placements.size(); ++i) {
      if (out.placements[i].tier == Tier::Hero) continue;
      PlacementSet trial = out;
      trial.placements.erase(trial.placements.begin() + (std::ptrdiff_t)i);
      rebuild_occupancy(trial, dilation);
      int comps = count_free_components(trial.occupancy, trial.grid_res);
      double area = out.placements[i].footprint_area();
      if (comps < best_comps || (comps == best_comps && area > best_area)) {
        best_idx = (int)i;
        best_comps = comps;
        best_area = area;
      }
    }
    if (best_idx < 0)
      throw NavigabilityImpossibleError(
          "enforce_navigability: hero placements alone disconnect free space");
    out.placements.erase(out.placements.begin() + best_idx);
    rebuild_occupancy(out, dilation);
  }
  (void)rs;
  return out;
}

}  // namespace worldgen
