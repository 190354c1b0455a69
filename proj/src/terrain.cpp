#include "worldgen/terrain.hpp"

#include <algorithm>
#include <cmath>

#include "worldgen/errors.hpp"
#include "worldgen/image_io.hpp"
#include "worldgen/rng.hpp"

namespace worldgen {

namespace {

// Gradient from the integer lattice point, derived from the seed so no
// permutation table is needed.
Vec2 lattice_gradient(int64_t ix, int64_t iy, uint64_t seed) {
  uint64_t h = hash_combine(hash_combine(seed, (uint64_t)ix * 0x9e3779b97f4a7c15ull),
                            (uint64_t)iy * 0xc2b2ae3d27d4eb4full);
  double ang = (double)(h >> 11) * (2.0 * 3.14159265358979323846 / 9007199254740992.0);
  return {std::cos(ang), std::sin(ang)};
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

}  // namespace

double perlin2(double x, double y, uint64_t seed) {
  int64_t x0 = (int64_t)std::floor(x), y0 = (int64_t)std::floor(y);
  double fx = x - (double)x0, fy = y - (double)y0;
  double u = fade(fx), v = fade(fy);
  auto dotg = [&](int64_t ix, int64_t iy, double dx, double dy) {
    Vec2 g = lattice_gradient(ix, iy, seed);
    return g.x * dx + g.y * dy;
  };
  double n00 = dotg(x0, y0, fx, fy);
  double n10 = dotg(x0 + 1, y0, fx - 1.0, fy);
  double n01 = dotg(x0, y0 + 1, fx, fy - 1.0);
  double n11 = dotg(x0 + 1, y0 + 1, fx - 1.0, fy - 1.0);
  double nx0 = n00 + u * (n10 - n00);
  double nx1 = n01 + u * (n11 - n01);
  // sqrt(2) renormalization puts single-octave output near [-1,1]
  return 1.41421356237 * (nx0 + v * (nx1 - nx0));
}

double fbm2(double x, double y, uint64_t seed, int octaves, double lacunarity,
            double persistence) {
  double sum = 0.0, amp = 1.0, freq = 1.0, norm = 0.0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * perlin2(x * freq, y * freq, hash_combine(seed, (uint64_t)o));
    norm += amp;
    amp *= persistence;
    freq *= lacunarity;
  }
  return norm > 0.0 ? sum / norm : 0.0;
}

HeightField generate_heightfield(const SceneSpec& spec, uint64_t rng_seed) {
  const int n = spec.terrain.resolution;
  const auto [lo, hi] = spec.terrain.elevation_range;
  HeightField hf;
  hf.resolution = n;
  hf.cell_size = spec.extent / (n - 1);
  hf.origin = {0.0, 0.0};
  hf.heights.assign((size_t)n * n, 0.0);

  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  switch (spec.terrain.kind) {
    case TerrainKind::Flat:
      for (auto& h : hf.heights) h = mid;
      break;
    case TerrainKind::Steep:
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          hf.at(i, j) = lo + (hi - lo) * ((double)i / (n - 1));
      break;
    case TerrainKind::Perlin: {
      // 4 octaves of gradient noise over ~4 feature cells across the extent.
      double base_freq = 4.0 / spec.extent;
      double persistence = std::max(0.05, spec.terrain.roughness);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          double wx = i * hf.cell_size, wy = j * hf.cell_size;
          double v = fbm2(wx * base_freq, wy * base_freq, rng_seed, 4, 2.0, persistence);
          hf.at(i, j) = mid + half * v;
        }
      break;
    }
    case TerrainKind::Plateau: {
      // Terraced: quantize low-frequency noise into 4 levels.
      double base_freq = 2.0 / spec.extent;
      const int levels = 4;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          double wx = i * hf.cell_size, wy = j * hf.cell_size;
          double v = 0.5 * (fbm2(wx * base_freq, wy * base_freq, rng_seed, 2, 2.0, 0.5) + 1.0);
          int step = std::clamp((int)(v * levels), 0, levels - 1);
          hf.at(i, j) = lo + (hi - lo) * ((double)step / (levels - 1 > 0 ? levels - 1 : 1));
        }
      // Relax terrace edges into ramps an agent can walk: limit the
      // per-axis height step so the combined surface gradient stays
      // well inside the agent's slope limit and single-cell climbs
      // stay inside its climb limit.
      {
        double slope_deg = std::clamp(spec.agent.max_slope_deg - 10.0, 5.0, 35.0);
        double axis_step = std::tan(slope_deg * 3.14159265358979323846 / 180.0) *
                           hf.cell_size / std::sqrt(2.0);
        axis_step = std::min(axis_step, 0.9 * spec.agent.max_climb);
        for (int pass = 0; pass < 256; ++pass) {
          bool changed = false;
          for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
              auto relax = [&](int ni, int nj) {
                if (ni < 0 || nj < 0 || ni >= n || nj >= n) return;
                double cap = hf.at(ni, nj) + axis_step;
                if (hf.at(i, j) > cap + 1e-12) {
                  hf.at(i, j) = cap;
                  changed = true;
                }
              };
              relax(i - 1, j);
              relax(i + 1, j);
              relax(i, j - 1);
              relax(i, j + 1);
            }
          if (!changed) break;
        }
      }
      break;
    }
  }

  for (auto& h : hf.heights) h = std::clamp(h, lo, hi);
  return hf;
}

double sample_height(const HeightField& hf, double x, double y) {
  double lx = (x - hf.origin.x) / hf.cell_size;
  double ly = (y - hf.origin.y) / hf.cell_size;
  int n = hf.resolution;
  if (lx < 0.0 || ly < 0.0 || lx > n - 1 || ly > n - 1)
    throw OutOfBoundsError("sample_height: query outside heightfield extent");
  int i0 = std::min((int)lx, n - 2);
  int j0 = std::min((int)ly, n - 2);
  double fx = lx - i0, fy = ly - j0;
  double h00 = hf.at(i0, j0), h10 = hf.at(i0 + 1, j0);
  double h01 = hf.at(i0, j0 + 1), h11 = hf.at(i0 + 1, j0 + 1);
  return h00 * (1 - fx) * (1 - fy) + h10 * fx * (1 - fy) +
         h01 * (1 - fx) * fy + h11 * fx * fy;
}

HeightField smooth_under_footprints(const HeightField& hf, const std::vector<Rect>& footprints) {
  if (footprints.empty()) return hf;
  HeightField out = hf;
  const int n = hf.resolution;
  const double cs = hf.cell_size;
  const int margin = 2;

  for (const auto& fp : footprints) {
    if (fp.min.x < hf.origin.x - 1e-9 || fp.min.y < hf.origin.y - 1e-9 ||
        fp.max.x > hf.origin.x + hf.extent() + 1e-9 ||
        fp.max.y > hf.origin.y + hf.extent() + 1e-9)
      throw OutOfBoundsError("smooth_under_footprints: footprint outside extent");

    // Pad = footprint dilated by one cell.
    int i0 = std::clamp((int)std::floor((fp.min.x - hf.origin.x) / cs) - 1, 0, n - 1);
    int i1 = std::clamp((int)std::ceil((fp.max.x - hf.origin.x) / cs) + 1, 0, n - 1);
    int j0 = std::clamp((int)std::floor((fp.min.y - hf.origin.y) / cs) - 1, 0, n - 1);
    int j1 = std::clamp((int)std::ceil((fp.max.y - hf.origin.y) / cs) + 1, 0, n - 1);

    double sum = 0.0;
    int count = 0;
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        sum += hf.at(i, j);
        ++count;
      }
    if (count == 0) continue;
    double pad = sum / count;

    int bi0 = std::max(i0 - margin, 0), bi1 = std::min(i1 + margin, n - 1);
    int bj0 = std::max(j0 - margin, 0), bj1 = std::min(j1 + margin, n - 1);
    for (int j = bj0; j <= bj1; ++j)
      for (int i = bi0; i <= bi1; ++i) {
        // Chebyshev cell distance to the pad rectangle.
        int dx = i < i0 ? i0 - i : (i > i1 ? i - i1 : 0);
        int dy = j < j0 ? j0 - j : (j > j1 ? j - j1 : 0);
        int d = std::max(dx, dy);
        if (d == 0) {
          out.at(i, j) = pad;
        } else {
          double t = (double)d / (margin + 1);  // 0 at pad edge, <1 inside margin
          // cosine falloff: full pad weight at the edge, fading to 0
          double w = 0.5 * (1.0 + std::cos(3.14159265358979323846 * t));
          out.at(i, j) = w * pad + (1.0 - w) * out.at(i, j);
        }
      }
  }
  return out;
}

TriMesh heightfield_to_mesh(const HeightField& hf) {
  TriMesh m;
  const int n = hf.resolution;
  m.vertices.reserve((size_t)n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.vertices.push_back({hf.origin.x + i * hf.cell_size,
                            hf.origin.y + j * hf.cell_size, hf.at(i, j)});
  m.part_names.push_back("ground");
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i + 1 < n; ++i) {
      int a = j * n + i, b = j * n + i + 1, c = (j + 1) * n + i, d = (j + 1) * n + i + 1;
      m.triangles.push_back({a, b, d});
      m.triangles.push_back({a, d, c});
      m.tri_part.push_back(0);
      m.tri_part.push_back(0);
    }
  return m;
}

void write_heightfield_png(const HeightField& hf, double elev_min, double elev_max,
                           const std::string& path) {
  const int n = hf.resolution;
  std::vector<uint16_t> px((size_t)n * n, 0);
  double range = elev_max - elev_min;
  for (size_t k = 0; k < hf.heights.size(); ++k) {
    double t = range > 0.0 ? (hf.heights[k] - elev_min) / range : 0.0;
    px[k] = (uint16_t)std::lround(std::clamp(t, 0.0, 1.0) * 65535.0);
  }
  write_png16(path, n, n, px);
}

}  // namespace worldgen
