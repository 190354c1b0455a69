#include "worldgen/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>

#include "worldgen/errors.hpp"
#include "worldgen/rng.hpp"
#include "worldgen/terrain.hpp"

namespace worldgen {

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

std::vector<Vec2> rect_poly(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

void bsp_split(double x0, double y0, double x1, double y1, int depth, Rng& rng,
               std::vector<std::vector<Vec2>>& out) {
  if (depth == 0) {
    out.push_back(rect_poly(x0, y0, x1, y1));
    return;
  }
  bool split_x = (x1 - x0) >= (y1 - y0);
  double t = rng.uniform(0.35, 0.65);
  if (split_x) {
    double xm = x0 + (x1 - x0) * t;
    bsp_split(x0, y0, xm, y1, depth - 1, rng, out);
    bsp_split(xm, y0, x1, y1, depth - 1, rng, out);
  } else {
    double ym = y0 + (y1 - y0) * t;
    bsp_split(x0, y0, x1, ym, depth - 1, rng, out);
    bsp_split(x0, ym, x1, y1, depth - 1, rng, out);
  }
}

void kd_split(std::vector<Vec2>& pts, double x0, double y0, double x1, double y1,
              int depth, int axis, std::vector<std::vector<Vec2>>& out) {
  if (depth == 0 || pts.size() < 2) {
    out.push_back(rect_poly(x0, y0, x1, y1));
    return;
  }
  auto cmp = [axis](const Vec2& a, const Vec2& b) {
    return axis == 0 ? a.x < b.x : a.y < b.y;
  };
  size_t mid = pts.size() / 2;
  std::nth_element(pts.begin(), pts.begin() + mid, pts.end(), cmp);
  double split = axis == 0 ? pts[mid].x : pts[mid].y;
  std::vector<Vec2> lo, hi;
  for (const auto& p : pts)
    ((axis == 0 ? p.x : p.y) < split ? lo : hi).push_back(p);
  if (axis == 0) {
    split = std::clamp(split, x0 + 1e-6, x1 - 1e-6);
    kd_split(lo, x0, y0, split, y1, depth - 1, 1, out);
    kd_split(hi, split, y0, x1, y1, depth - 1, 1, out);
  } else {
    split = std::clamp(split, y0 + 1e-6, y1 - 1e-6);
    kd_split(lo, x0, y0, x1, split, depth - 1, 0, out);
    kd_split(hi, x0, split, x1, y1, depth - 1, 0, out);
  }
}

// Bridson-style Poisson-disc sampling on [0,extent]^2.
std::vector<Vec2> poisson_disc(double extent, int target, Rng& rng) {
  double r = extent * std::sqrt(1.0 / (double)target) * 0.75;
  double cell = r / 1.41421356237;
  int gn = std::max(1, (int)std::ceil(extent / cell));
  std::vector<int> grid((size_t)gn * gn, -1);
  std::vector<Vec2> pts;
  std::vector<int> active;
  auto grid_idx = [&](const Vec2& p) {
    int i = std::min((int)(p.x / cell), gn - 1);
    int j = std::min((int)(p.y / cell), gn - 1);
    return j * gn + i;
  };
  auto ok = [&](const Vec2& p) {
    int ci = std::min((int)(p.x / cell), gn - 1);
    int cj = std::min((int)(p.y / cell), gn - 1);
    for (int j = std::max(0, cj - 2); j <= std::min(gn - 1, cj + 2); ++j)
      for (int i = std::max(0, ci - 2); i <= std::min(gn - 1, ci + 2); ++i) {
        int k = grid[(size_t)j * gn + i];
        if (k >= 0 && (pts[k] - p).norm() < r) return false;
      }
    return true;
  };
  Vec2 first{rng.uniform(0.0, extent), rng.uniform(0.0, extent)};
  pts.push_back(first);
  grid[grid_idx(first)] = 0;
  active.push_back(0);
  while (!active.empty() && (int)pts.size() < target) {
    size_t ai = (size_t)rng.uniform_int(0, (int64_t)active.size() - 1);
    int base = active[ai];
    bool found = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      double rad = rng.uniform(r, 2.0 * r);
      Vec2 p{pts[base].x + rad * std::cos(ang), pts[base].y + rad * std::sin(ang)};
      if (p.x < 0 || p.y < 0 || p.x >= extent || p.y >= extent) continue;
      if (!ok(p)) continue;
      grid[grid_idx(p)] = (int)pts.size();
      pts.push_back(p);
      active.push_back((int)pts.size() - 1);
      found = true;
      break;
    }
    if (!found) active.erase(active.begin() + (std::ptrdiff_t)ai);
  }
  // Top up uniformly if the disc radius was too conservative.
  while ((int)pts.size() < target)
    pts.push_back({rng.uniform(0.0, extent), rng.uniform(0.0, extent)});
  return pts;
}

std::vector<std::vector<Vec2>> voronoi_cells(double extent, const std::vector<Vec2>& sites) {
  std::vector<std::vector<Vec2>> cells;
  cells.reserve(sites.size());
  for (size_t i = 0; i < sites.size(); ++i) {
    std::vector<Vec2> poly = rect_poly(0, 0, extent, extent);
    for (size_t j = 0; j < sites.size() && !poly.empty(); ++j) {
      if (i == j) continue;
      // Keep the half-plane closer to site i: n.p <= c with n = sj - si.
      Vec2 n = sites[j] - sites[i];
      double c = 0.5 * (sites[j].dot(sites[j]) - sites[i].dot(sites[i]));
      poly = clip_halfplane(poly, n, c);
    }
    cells.push_back(std::move(poly));
  }
  return cells;
}

// Largest 4-connected component of set cells; everything else cleared.
void keep_largest_component(std::vector<uint8_t>& mask, int res) {
  std::vector<int> label((size_t)res * res, -1);
  int best_label = -1, best_size = 0, next = 0;
  for (int start = 0; start < res * res; ++start) {
    if (!mask[start] || label[start] >= 0) continue;
    int size = 0;
    std::queue<int> q;
    q.push(start);
    label[start] = next;
    while (!q.empty()) {
      int c = q.front(); q.pop();
      ++size;
      int ci = c % res, cj = c / res;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int ni = ci + di[k], nj = cj + dj[k];
        if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
        int n = nj * res + ni;
        if (mask[n] && label[n] < 0) {
          label[n] = next;
          q.push(n);
        }
      }
    }
    if (size > best_size) { best_size = size; best_label = next; }
    ++next;
  }
  for (int c = 0; c < res * res; ++c)
    mask[c] = (mask[c] && label[c] == best_label) ? 1 : 0;
}

void add_grid_regions(RegionSet& rs, int per_side) {
  double step = rs.extent / per_side;
  int id = 0;
  for (int j = 0; j < per_side; ++j)
    for (int i = 0; i < per_side; ++i)
      rs.regions.push_back({id++, rect_poly(i * step, j * step, (i + 1) * step, (j + 1) * step),
                            RegionRole::Transition});
}

}  // namespace

RegionSet make_partition(double extent, PartitionStrategy strategy,
                         const std::map<std::string, double>& params, int region_count_hint,
                         uint64_t seed) {
  if (extent <= 0.0) throw BadParamsError("partition: extent must be positive");
  if (region_count_hint < 1) throw BadParamsError("partition: region_count_hint must be >= 1");

  RegionSet rs;
  rs.extent = extent;
  Rng rng(hash_combine(seed, (uint64_t)strategy * 977));

  switch (strategy) {
    case PartitionStrategy::Grid: {
      add_grid_regions(rs, std::max(1, (int)std::ceil(std::sqrt((double)region_count_hint))));
      break;
    }
    case PartitionStrategy::Bsp: {
      int depth = std::max(0, (int)std::ceil(std::log2((double)region_count_hint)));
      std::vector<std::vector<Vec2>> polys;
      bsp_split(0, 0, extent, extent, depth, rng, polys);
      for (auto& p : polys)
        rs.regions.push_back({(int)rs.regions.size(), std::move(p), RegionRole::Transition});
      break;
    }
    case PartitionStrategy::Kdtree: {
      int depth = std::max(0, (int)std::ceil(std::log2((double)region_count_hint)));
      int n_samples = std::max(region_count_hint * 8, 64);
      std::vector<Vec2> pts;
      pts.reserve((size_t)n_samples);
      for (int i = 0; i < n_samples; ++i)
        pts.push_back({rng.uniform(0.0, extent), rng.uniform(0.0, extent)});
      std::vector<std::vector<Vec2>> polys;
      kd_split(pts, 0, 0, extent, extent, depth, 0, polys);
      for (auto& p : polys)
        rs.regions.push_back({(int)rs.regions.size(), std::move(p), RegionRole::Transition});
      break;
    }
    case PartitionStrategy::Voronoi: {
      auto sites = poisson_disc(extent, region_count_hint, rng);
      auto cells = voronoi_cells(extent, sites);
      for (auto& c : cells) {
        if (c.size() < 3) continue;
        if (polygon_area(c) < 0) std::reverse(c.begin(), c.end());
        rs.regions.push_back({(int)rs.regions.size(), std::move(c), RegionRole::Transition});
      }
      break;
    }
    case PartitionStrategy::Noise:
    case PartitionStrategy::Drunkard: {
      int res = (int)param_or(params, "mask_res", 64.0);
      if (res < 4) throw BadParamsError("partition: mask_res must be >= 4");
      double coverage = param_or(params, "coverage", 0.45);
      if (coverage <= 0.0 || coverage >= 1.0)
        throw BadParamsError("partition: coverage must be in (0,1)");
      rs.mask_res = res;
      rs.walkable_mask.assign((size_t)res * res, 0);

      if (strategy == PartitionStrategy::Drunkard) {
        // Random walk from the center carves until the coverage target.
        int target = (int)std::lround(coverage * res * res);
        int ci = res / 2, cj = res / 2;
        int carved = 0;
        auto carve = [&](int i, int j) {
          uint8_t& c = rs.walkable_mask[(size_t)j * res + i];
          if (!c) { c = 1; ++carved; }
        };
        carve(ci, cj);
        int64_t max_steps = (int64_t)res * res * 200;
        for (int64_t s = 0; s < max_steps && carved < target; ++s) {
          int dir = (int)rng.uniform_int(0, 3);
          const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
          int ni = ci + di[dir], nj = cj + dj[dir];
          if (ni < 1 || nj < 1 || ni >= res - 1 || nj >= res - 1) continue;
          ci = ni; cj = nj;
          carve(ci, cj);
        }
      } else {
        // Threshold low-frequency noise; walkable where noise is low.
        double freq = 3.0 / extent;
        std::vector<double> vals((size_t)res * res);
        for (int j = 0; j < res; ++j)
          for (int i = 0; i < res; ++i) {
            double wx = (i + 0.5) * extent / res, wy = (j + 0.5) * extent / res;
            vals[(size_t)j * res + i] = fbm2(wx * freq, wy * freq, seed, 2, 2.0, 0.5);
          }
        std::vector<double> sorted = vals;
        std::sort(sorted.begin(), sorted.end());
        double thresh = sorted[(size_t)std::min((double)sorted.size() - 1,
                                                coverage * sorted.size())];
        for (size_t c = 0; c < vals.size(); ++c)
          rs.walkable_mask[c] = vals[c] <= thresh ? 1 : 0;
        keep_largest_component(rs.walkable_mask, res);
      }

      add_grid_regions(rs, std::max(1, (int)std::ceil(std::sqrt((double)region_count_hint))));
      break;
    }
  }
  return rs;
}

RegionSet assign_roles(const RegionSet& rs, const SceneSpec& spec, uint64_t seed) {
  RegionSet out = rs;
  int n = (int)out.regions.size();
  if (n == 0) return out;
  if (n == 1) {
    out.regions[0].role = RegionRole::Cluster;
    return out;
  }

  double frac = 0.5;
  switch (spec.density.tier) {
    case DensityTier::Low: frac = 0.3; break;
    case DensityTier::Medium: frac = 0.5; break;
    case DensityTier::High: frac = 0.7; break;
  }
  int n_cluster = std::clamp((int)std::lround(frac * n), 1, n - 1);

  // Score regions: mask strategies favor the least-walkable regions as
  // clusters; tiling strategies use a seeded shuffle.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(hash_combine(seed, 0x726f6c65ull));
  if (out.has_mask()) {
    std::vector<double> cover(n, 0.0);
    int res = out.mask_res;
    for (int j = 0; j < res; ++j)
      for (int i = 0; i < res; ++i) {
        if (!out.mask_at(i, j)) continue;
        Vec2 p{(i + 0.5) * out.extent / res, (j + 0.5) * out.extent / res};
        for (int r = 0; r < n; ++r)
          if (point_in_polygon(out.regions[r].polygon, p)) {
            cover[r] += 1.0;
            break;
          }
      }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (cover[a] != cover[b]) return cover[a] < cover[b];
      return a < b;
    });
  } else {
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[(size_t)rng.uniform_int(0, i)]);
  }

  for (int k = 0; k < n; ++k) {
    Region& r = out.regions[order[k]];
    if (k < n_cluster)
      r.role = RegionRole::Cluster;
    else if ((k - n_cluster) % 2 == 0)
      r.role = RegionRole::Open;
    else
      r.role = RegionRole::Transition;
  }
  return out;
}

void write_regions_svg(const RegionSet& rs, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_regions_svg: cannot open " + path);
  double s = 512.0 / rs.extent;
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" "
       "viewBox=\"0 0 512 512\">\n";
  for (const auto& r : rs.regions) {
    const char* fill = r.role == RegionRole::Cluster ? "#d88"
                       : r.role == RegionRole::Open ? "#8d8"
                                                    : "#88d";
    f << "<polygon fill=\"" << fill << "\" stroke=\"#333\" points=\"";
    for (const auto& p : r.polygon) f << p.x * s << "," << p.y * s << " ";
    f << "\"/>\n";
  }
  if (rs.has_mask()) {
    double cs = 512.0 / rs.mask_res;
    for (int j = 0; j < rs.mask_res; ++j)
      for (int i = 0; i < rs.mask_res; ++i)
        if (rs.mask_at(i, j))
          f << "<rect x=\"" << i * cs << "\" y=\"" << j * cs << "\" width=\"" << cs
            << "\" height=\"" << cs << "\" fill=\"#4a4\" fill-opacity=\"0.5\"/>\n";
  }
  f << "</svg>\n";
}

}  // namespace worldgen
