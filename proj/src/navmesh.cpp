#include "worldgen/navmesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <queue>

#include "worldgen/errors.hpp"
#include "worldgen/mesh_io.hpp"
#include "worldgen/rng.hpp"

namespace worldgen {

double NavPolygon::area() const {
  double a = 0.0;
  int n = (int)vertices.size();
  for (int i = 0; i < n; ++i) {
    const Vec3& p = vertices[i];
    const Vec3& q = vertices[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

double NavMesh::total_area() const {
  double a = 0.0;
  for (const auto& p : polygons) a += p.area();
  return a;
}

TriMesh NavMesh::to_mesh() const {
  TriMesh m;
  std::map<int, int> region_part;
  for (const auto& poly : polygons) {
    if (!region_part.count(poly.region_id)) {
      region_part[poly.region_id] = (int)m.part_names.size();
      m.part_names.push_back("region_" + std::to_string(poly.region_id));
    }
    int part = region_part[poly.region_id];
    int base = (int)m.vertices.size();
    m.vertices.insert(m.vertices.end(), poly.vertices.begin(), poly.vertices.end());
    for (int k = 2; k < (int)poly.vertices.size(); ++k) {
      m.triangles.push_back({base, base + k - 1, base + k});
      m.tri_part.push_back(part);
    }
  }
  return m;
}

namespace {

struct Span {
  int smin, smax;   // quantized, half-open
  bool walkable;    // top surface came from a slope-walkable triangle
};

struct Floor {
  int ci, cj;       // cell
  int top;          // quantized top
  double top_z;     // world z of the surface
  bool walkable;
  int region = -1;
  int poly = -1;
};

// Clip a 3D polygon to the slab lo <= axis <= hi (axis 0 = x, 1 = y).
void clip_axis(std::vector<Vec3>& poly, int axis, double lo, double hi) {
  auto coord = [axis](const Vec3& v) { return axis == 0 ? v.x : v.y; };
  for (int side = 0; side < 2; ++side) {
    std::vector<Vec3> out;
    double bound = side == 0 ? lo : hi;
    double sign = side == 0 ? -1.0 : 1.0;  // keep sign*(c - bound) <= 0
    int n = (int)poly.size();
    for (int i = 0; i < n; ++i) {
      const Vec3& a = poly[i];
      const Vec3& b = poly[(i + 1) % n];
      double da = sign * (coord(a) - bound);
      double db = sign * (coord(b) - bound);
      if (da <= 0) out.push_back(a);
      if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
        double t = da / (da - db);
        out.push_back(a + (b - a) * t);
      }
    }
    poly = std::move(out);
    if (poly.empty()) return;
  }
}

}  // namespace

NavMesh bake_navmesh(const TriMesh& mesh, const AgentParams& agent, double cell_size,
                     double cell_height, double min_region_area) {
  if (mesh.triangles.empty() || cell_size <= 0.0)
    throw BadParamsError("bake_navmesh: empty mesh or non-positive cell size");

  NavMesh nm;
  nm.cell_size = cell_size;
  nm.cell_height = cell_height;

  Aabb3 bb = mesh.bounds();
  const int w = std::max(1, (int)std::ceil((bb.max.x - bb.min.x) / cell_size));
  const int h = std::max(1, (int)std::ceil((bb.max.y - bb.min.y) / cell_size));
  const double zbase = bb.min.z - cell_height;
  const double slope_cos = std::cos(agent.max_slope_deg * 3.14159265358979323846 / 180.0);

  // (1) conservative voxelization into column spans
  std::vector<std::vector<Span>> columns((size_t)w * h);
  auto add_span = [&](int ci, int cj, int smin, int smax, bool walkable) {
    auto& col = columns[(size_t)cj * w + ci];
    Span ns{smin, smax, walkable};
    for (size_t k = 0; k < col.size();) {
      Span& s = col[k];
      if (s.smax < ns.smin || ns.smax < s.smin) {
        ++k;
        continue;
      }
      // merge; top flag follows the higher top
      if (s.smax > ns.smax)
        ns.walkable = s.walkable;
      else if (s.smax == ns.smax)
        ns.walkable = ns.walkable || s.walkable;
      ns.smin = std::min(ns.smin, s.smin);
      ns.smax = std::max(ns.smax, s.smax);
      col.erase(col.begin() + (std::ptrdiff_t)k);
    }
    col.push_back(ns);
  };

  for (int t = 0; t < (int)mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    Vec3 n = mesh.triangle_normal(t);
    double len = n.norm();
    if (len <= 0.0) continue;
    bool walk = n.z / len >= slope_cos;
    Vec3 tv[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
    double tminx = std::min({tv[0].x, tv[1].x, tv[2].x});
    double tmaxx = std::max({tv[0].x, tv[1].x, tv[2].x});
    double tminy = std::min({tv[0].y, tv[1].y, tv[2].y});
    double tmaxy = std::max({tv[0].y, tv[1].y, tv[2].y});
    int i0 = std::clamp((int)((tminx - bb.min.x) / cell_size), 0, w - 1);
    int i1 = std::clamp((int)((tmaxx - bb.min.x) / cell_size), 0, w - 1);
    int j0 = std::clamp((int)((tminy - bb.min.y) / cell_size), 0, h - 1);
    int j1 = std::clamp((int)((tmaxy - bb.min.y) / cell_size), 0, h - 1);
    for (int cj = j0; cj <= j1; ++cj)
      for (int ci = i0; ci <= i1; ++ci) {
        std::vector<Vec3> poly(tv, tv + 3);
        clip_axis(poly, 0, bb.min.x + ci * cell_size, bb.min.x + (ci + 1) * cell_size);
        if (poly.empty()) continue;
        clip_axis(poly, 1, bb.min.y + cj * cell_size, bb.min.y + (cj + 1) * cell_size);
        if (poly.empty()) continue;
        double zmin = 1e300, zmax = -1e300;
        for (const auto& v : poly) {
          zmin = std::min(zmin, v.z);
          zmax = std::max(zmax, v.z);
        }
        int smin = (int)std::floor((zmin - zbase) / cell_height);
        int smax = (int)std::floor((zmax - zbase) / cell_height) + 1;
        add_span(ci, cj, smin, smax, walk);
      }
  }

  // (2) walkable floors: slope flag plus head clearance above the top
  std::vector<Floor> floors;
  std::vector<std::vector<int>> cell_floors((size_t)w * h);
  for (int cj = 0; cj < h; ++cj)
    for (int ci = 0; ci < w; ++ci) {
      auto& col = columns[(size_t)cj * w + ci];
      std::sort(col.begin(), col.end(),
                [](const Span& a, const Span& b) { return a.smin < b.smin; });
      for (size_t k = 0; k < col.size(); ++k) {
        double ceiling = k + 1 < col.size() ? zbase + col[k + 1].smin * cell_height : 1e300;
        double top_z = zbase + col[k].smax * cell_height;
        bool walkable = col[k].walkable && (ceiling - top_z) >= agent.height;
        cell_floors[(size_t)cj * w + ci].push_back((int)floors.size());
        floors.push_back({ci, cj, col[k].smax, top_z, walkable});
      }
    }
  if (floors.empty()) return nm;

  const int climb_int = (int)std::floor(agent.max_climb / cell_height + 1e-9);
  auto neighbors = [&](int fi, std::vector<int>& out) {
    out.clear();
    const Floor& f = floors[fi];
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      int ni = f.ci + di[d], nj = f.cj + dj[d];
      if (ni < 0 || nj < 0 || ni >= w || nj >= h) continue;
      for (int g : cell_floors[(size_t)nj * w + ni])
        if (std::abs(floors[g].top - f.top) <= climb_int) out.push_back(g);
    }
  };

  // (3) erosion by agent radius: BFS distance from boundary floors
  const int radius_cells = (int)std::ceil(agent.radius / cell_size);
  if (radius_cells > 0) {
    std::vector<int> dist(floors.size(), std::numeric_limits<int>::max());
    std::queue<int> q;
    std::vector<int> nbrs;
    for (size_t fi = 0; fi < floors.size(); ++fi) {
      if (!floors[fi].walkable) continue;
      const Floor& f = floors[fi];
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      bool boundary = false;
      for (int d = 0; d < 4 && !boundary; ++d) {
        int ni = f.ci + di[d], nj = f.cj + dj[d];
        if (ni < 0 || nj < 0 || ni >= w || nj >= h) {
          boundary = true;
          break;
        }
        bool has_walkable_nb = false;
        for (int g : cell_floors[(size_t)nj * w + ni])
          if (floors[g].walkable && std::abs(floors[g].top - f.top) <= climb_int)
            has_walkable_nb = true;
        if (!has_walkable_nb) boundary = true;
      }
      if (boundary) {
        dist[fi] = 0;
        q.push((int)fi);
      }
    }
    while (!q.empty()) {
      int fi = q.front();
      q.pop();
      neighbors(fi, nbrs);
      for (int g : nbrs) {
        if (!floors[g].walkable) continue;
        if (dist[g] > dist[fi] + 1) {
          dist[g] = dist[fi] + 1;
          q.push(g);
        }
      }
    }
    for (size_t fi = 0; fi < floors.size(); ++fi)
      if (floors[fi].walkable && dist[fi] < radius_cells) floors[fi].walkable = false;
  }

  // (4) region growing over walkable floors
  int n_regions = 0;
  {
    std::vector<int> nbrs;
    for (size_t start = 0; start < floors.size(); ++start) {
      if (!floors[start].walkable || floors[start].region >= 0) continue;
      std::queue<int> q;
      q.push((int)start);
      floors[start].region = n_regions;
      while (!q.empty()) {
        int fi = q.front();
        q.pop();
        neighbors(fi, nbrs);
        for (int g : nbrs)
          if (floors[g].walkable && floors[g].region < 0) {
            floors[g].region = n_regions;
            q.push(g);
          }
      }
      ++n_regions;
    }
  }

  // cull regions below the minimum area
  {
    std::vector<double> region_area(n_regions, 0.0);
    for (const auto& f : floors)
      if (f.region >= 0) region_area[f.region] += cell_size * cell_size;
    for (auto& f : floors)
      if (f.region >= 0 && region_area[f.region] < min_region_area) {
        f.walkable = false;
        f.region = -1;
      }
  }

  // (5) polygonization: per (region, level), greedy rectangle merge of
  // equal-height cells; rectangles stay convex with 4 vertices
  struct LevelKey {
    int region, top;
    bool operator<(const LevelKey& o) const {
      return region != o.region ? region < o.region : top < o.top;
    }
  };
  std::map<LevelKey, std::vector<int>> groups;
  for (size_t fi = 0; fi < floors.size(); ++fi)
    if (floors[fi].walkable && floors[fi].region >= 0)
      groups[{floors[fi].region, floors[fi].top}].push_back((int)fi);

  for (auto& [key, members] : groups) {
    // cell mask for this level
    std::map<std::pair<int, int>, int> cells;  // (ci,cj) -> floor index
    for (int fi : members) cells[{floors[fi].ci, floors[fi].cj}] = fi;
    std::map<std::pair<int, int>, char> used;
    double z = zbase + key.top * cell_height;
    for (int fi : members) {
      int ci = floors[fi].ci, cj = floors[fi].cj;
      if (used.count({ci, cj})) continue;
      // grow a run to the right
      int rw = 1;
      while (cells.count({ci + rw, cj}) && !used.count({ci + rw, cj})) ++rw;
      // grow the run downward while the whole row matches
      int rh = 1;
      bool grow = true;
      while (grow) {
        for (int k = 0; k < rw; ++k)
          if (!cells.count({ci + k, cj + rh}) || used.count({ci + k, cj + rh})) {
            grow = false;
            break;
          }
        if (grow) ++rh;
      }
      for (int jj = 0; jj < rh; ++jj)
        for (int ii = 0; ii < rw; ++ii) {
          used[{ci + ii, cj + jj}] = 1;
          floors[cells[{ci + ii, cj + jj}]].poly = (int)nm.polygons.size();
        }
      NavPolygon poly;
      double x0 = bb.min.x + ci * cell_size, x1 = bb.min.x + (ci + rw) * cell_size;
      double y0 = bb.min.y + cj * cell_size, y1 = bb.min.y + (cj + rh) * cell_size;
      poly.vertices = {{x0, y0, z}, {x1, y0, z}, {x1, y1, z}, {x0, y1, z}};
      poly.region_id = key.region;
      nm.polygons.push_back(std::move(poly));
    }
  }

  // (6) adjacency from floor neighborhood
  {
    std::vector<int> nbrs;
    std::vector<std::pair<int, int>> edges;
    for (size_t fi = 0; fi < floors.size(); ++fi) {
      if (floors[fi].poly < 0) continue;
      neighbors((int)fi, nbrs);
      for (int g : nbrs) {
        if (floors[g].poly < 0) continue;
        int a = floors[fi].poly, b = floors[g].poly;
        if (a == b) continue;
        edges.push_back({std::min(a, b), std::max(a, b)});
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    nm.adjacency = std::move(edges);
  }

  return nm;
}

std::vector<std::pair<int, double>> connectivity_components(const NavMesh& nm) {
  int n = (int)nm.polygons.size();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : nm.adjacency) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> comp(n, -1);
  int n_comp = 0;
  for (int start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    std::queue<int> q;
    q.push(start);
    comp[start] = n_comp;
    while (!q.empty()) {
      int c = q.front();
      q.pop();
      for (int nb : adj[c])
        if (comp[nb] < 0) {
          comp[nb] = n_comp;
          q.push(nb);
        }
    }
    ++n_comp;
  }
  std::vector<std::pair<int, double>> out(n_comp);
  for (int c = 0; c < n_comp; ++c) out[c] = {c, 0.0};
  for (int p = 0; p < n; ++p) out[comp[p]].second += nm.polygons[p].area();
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

void export_navmesh_obj(const NavMesh& nm, const std::string& path) {
  export_mesh(nm.to_mesh(), MeshFormat::Obj, path);
}

void export_navmesh_json(const NavMesh& nm, const std::string& path) {
  using nlohmann::json;
  json j;
  j["cell_size"] = nm.cell_size;
  j["cell_height"] = nm.cell_height;
  j["polygons"] = json::array();
  for (const auto& p : nm.polygons) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back({v.x, v.y, v.z});
    j["polygons"].push_back({{"region", p.region_id}, {"vertices", verts}});
  }
  j["adjacency"] = json::array();
  for (const auto& [a, b] : nm.adjacency) j["adjacency"].push_back({a, b});
  std::ofstream f(path);
  if (!f) throw IoError("export_navmesh_json: cannot open " + path);
  f << j.dump();
  if (!f) throw IoError("export_navmesh_json: write failed for " + path);
}

uint64_t mesh_content_seed(const TriMesh& mesh) {
  uint64_t s = 0x776f726c64ull;
  for (const auto& v : mesh.vertices) {
    uint64_t b;
    std::memcpy(&b, &v.x, 8);
    s = hash_combine(s, b);
    std::memcpy(&b, &v.y, 8);
    s = hash_combine(s, b);
    std::memcpy(&b, &v.z, 8);
    s = hash_combine(s, b);
  }
  for (const auto& t : mesh.triangles)
    s = hash_combine(s, ((uint64_t)(uint32_t)t[0] << 42) ^ ((uint64_t)(uint32_t)t[1] << 21) ^
                            (uint64_t)(uint32_t)t[2]);
  return s;
}

PointCloud sample_surface(const TriMesh& mesh, int count, uint64_t seed) {
  double total = mesh.total_area();
  if (total <= 0.0) throw ZeroAreaError("sample_surface: mesh has zero area");

  std::vector<double> cum(mesh.triangles.size());
  double acc = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    acc += mesh.triangle_area((int)t);
    cum[t] = acc;
  }

  Rng rng(hash_combine(seed, 0x73616d70ull));
  PointCloud pc;
  pc.points.reserve((size_t)count);
  pc.normals.reserve((size_t)count);
  for (int s = 0; s < count; ++s) {
    double r = rng.uniform01() * total;
    size_t t = std::lower_bound(cum.begin(), cum.end(), r) - cum.begin();
    if (t >= mesh.triangles.size()) t = mesh.triangles.size() - 1;
    const auto& tri = mesh.triangles[t];
    double u = rng.uniform01(), v = rng.uniform01();
    double su = std::sqrt(u);
    double b0 = 1.0 - su, b1 = su * (1.0 - v), b2 = su * v;
    Vec3 p = mesh.vertices[tri[0]] * b0 + mesh.vertices[tri[1]] * b1 +
             mesh.vertices[tri[2]] * b2;
    pc.points.push_back(p);
    pc.normals.push_back(mesh.triangle_normal((int)t).normalized());
  }
  return pc;
}

PointCloud fps(const PointCloud& pc, int k) {
  int n = (int)pc.points.size();
  if (k < 1 || k > n) throw BadKError("fps: k out of range");
  PointCloud out;
  out.points.reserve((size_t)k);
  if (pc.has_normals()) out.normals.reserve((size_t)k);

  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  int current = 0;  // seed from index 0
  for (int s = 0; s < k; ++s) {
    out.points.push_back(pc.points[current]);
    if (pc.has_normals()) out.normals.push_back(pc.normals[current]);
    double far_d = -1.0;
    int far_i = current;
    for (int i = 0; i < n; ++i) {
      double d = (pc.points[i] - pc.points[current]).norm2();
      if (d < best[i]) best[i] = d;
      if (best[i] > far_d) {
        far_d = best[i];
        far_i = i;
      }
    }
    current = far_i;
  }
  return out;
}

}  // namespace worldgen
