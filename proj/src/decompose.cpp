#include "worldgen/decompose.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "worldgen/errors.hpp"

namespace worldgen {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  double a = d1.dot(d1), e = d2.dot(d2), f = d2.dot(r);
  double s, t;
  if (a <= 1e-30 && e <= 1e-30) return r.norm();
  if (a <= 1e-30) {
    s = 0.0;
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    double c = d1.dot(r);
    if (e <= 1e-30) {
      t = 0.0;
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      double b = d1.dot(d2), denom = a * e - b * b;
      s = denom > 1e-30 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  Vec3 c1 = p1 + d1 * s, c2 = p2 + d2 * t;
  return (c1 - c2).norm();
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();
  Vec3 bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double v = d1 / (d1 - d3);
    return (p - (a + ab * v)).norm();
  }
  Vec3 cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double w = d2 / (d2 - d6);
    return (p - (a + ac * w)).norm();
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + (c - b) * w)).norm();
  }
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).norm();
}

}  // namespace

double triangle_distance(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                         const Vec3& b1, const Vec3& b2) {
  double d = std::min({point_triangle_distance(a0, b0, b1, b2),
                       point_triangle_distance(a1, b0, b1, b2),
                       point_triangle_distance(a2, b0, b1, b2),
                       point_triangle_distance(b0, a0, a1, a2),
                       point_triangle_distance(b1, a0, a1, a2),
                       point_triangle_distance(b2, a0, a1, a2)});
  const Vec3* ea[3][2] = {{&a0, &a1}, {&a1, &a2}, {&a2, &a0}};
  const Vec3* eb[3][2] = {{&b0, &b1}, {&b1, &b2}, {&b2, &b0}};
  for (auto& sa : ea)
    for (auto& sb : eb)
      d = std::min(d, segment_distance(*sa[0], *sa[1], *sb[0], *sb[1]));
  return d;
}

TriMesh weld_vertices(const TriMesh& mesh, double eps) {
  TriMesh out;
  std::vector<int> remap(mesh.vertices.size(), -1);
  if (eps <= 0.0) {
    out = mesh;
    return out;
  }
  // Snap-to-grid with a hash map; first occurrence wins.
  std::unordered_map<uint64_t, int> grid;
  grid.reserve(mesh.vertices.size() * 2);
  auto key = [eps](const Vec3& v) {
    auto q = [eps](double x) { return (int64_t)std::llround(x / eps); };
    uint64_t kx = (uint64_t)(q(v.x) + (int64_t)1e9);
    uint64_t ky = (uint64_t)(q(v.y) + (int64_t)1e9);
    uint64_t kz = (uint64_t)(q(v.z) + (int64_t)1e9);
    return kx * 0x9e3779b97f4a7c15ull ^ ky * 0xc2b2ae3d27d4eb4full ^ kz * 0x2545f4914f6cdd1dull;
  };
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    uint64_t k = key(mesh.vertices[i]);
    auto it = grid.find(k);
    if (it == grid.end()) {
      grid[k] = (int)out.vertices.size();
      remap[i] = (int)out.vertices.size();
      out.vertices.push_back(mesh.vertices[i]);
    } else {
      remap[i] = it->second;
    }
  }
  // Drop degenerate and exact-duplicate faces.
  std::unordered_map<uint64_t, char> seen_faces;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    std::array<int, 3> tri{remap[mesh.triangles[t][0]], remap[mesh.triangles[t][1]],
                           remap[mesh.triangles[t][2]]};
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) continue;
    std::array<int, 3> s = tri;
    std::sort(s.begin(), s.end());
    uint64_t fk = ((uint64_t)s[0] << 42) ^ ((uint64_t)s[1] << 21) ^ (uint64_t)s[2];
    if (seen_faces.count(fk)) continue;
    seen_faces[fk] = 1;
    out.triangles.push_back(tri);
  }
  return out;
}

std::vector<TriMesh> connected_components(const TriMesh& mesh) {
  int nv = (int)mesh.vertices.size();
  UnionFind uf(nv);
  for (const auto& t : mesh.triangles) {
    uf.unite(t[0], t[1]);
    uf.unite(t[1], t[2]);
  }
  std::map<int, int> root_to_comp;
  std::vector<int> vcomp(nv, -1);
  for (int v = 0; v < nv; ++v) {
    int r = uf.find(v);
    auto it = root_to_comp.find(r);
    if (it == root_to_comp.end()) {
      int c = (int)root_to_comp.size();
      root_to_comp[r] = c;
      vcomp[v] = c;
    } else {
      vcomp[v] = it->second;
    }
  }
  int nc = (int)root_to_comp.size();
  std::vector<TriMesh> comps(nc);
  std::vector<std::vector<int>> vmap(nc);
  std::vector<int> local(nv, -1);
  for (int v = 0; v < nv; ++v) {
    int c = vcomp[v];
    local[v] = (int)comps[c].vertices.size();
    comps[c].vertices.push_back(mesh.vertices[v]);
  }
  for (const auto& t : mesh.triangles) {
    int c = vcomp[t[0]];
    comps[c].triangles.push_back({local[t[0]], local[t[1]], local[t[2]]});
  }
  // Components with no triangles (isolated vertices) are dropped.
  std::vector<TriMesh> out;
  for (auto& c : comps)
    if (!c.triangles.empty()) out.push_back(std::move(c));
  return out;
}

TriMesh Part::world_mesh() const {
  TriMesh m = mesh;
  for (auto& v : m.vertices) v = v + pose;
  return m;
}

namespace {

Part make_part(TriMesh mesh, PartLabel label) {
  Part p;
  Vec3 c{};
  for (const auto& v : mesh.vertices) c = c + v;
  if (!mesh.vertices.empty()) c = c / (double)mesh.vertices.size();
  for (auto& v : mesh.vertices) v = v - c;
  p.pose = c;
  p.label = label;
  p.vertex_count = (int)mesh.vertices.size();
  p.area = mesh.total_area();
  Aabb3 bb = mesh.bounds();
  Vec3 e = bb.extent();
  p.volume_proxy = e.x * e.y * e.z;
  p.mesh = std::move(mesh);
  return p;
}

double projected_area(const TriMesh& m) {
  double a = 0.0;
  for (int t = 0; t < (int)m.triangles.size(); ++t) {
    Vec3 n = m.triangle_normal(t);
    a += 0.5 * std::abs(n.z);
  }
  return a;
}

double median_slope_deg(const TriMesh& m) {
  std::vector<double> slopes;
  for (int t = 0; t < (int)m.triangles.size(); ++t) {
    Vec3 n = m.triangle_normal(t);
    double len = n.norm();
    if (len <= 0.0) continue;
    slopes.push_back(std::acos(std::clamp(std::abs(n.z) / len, 0.0, 1.0)) * 180.0 /
                     3.14159265358979323846);
  }
  if (slopes.empty()) return 90.0;
  std::sort(slopes.begin(), slopes.end());
  return slopes[slopes.size() / 2];
}

double mesh_min_distance(const TriMesh& a, const TriMesh& b, double early_out) {
  double best = 1e300;
  for (const auto& ta : a.triangles) {
    for (const auto& tb : b.triangles) {
      double d = triangle_distance(a.vertices[ta[0]], a.vertices[ta[1]], a.vertices[ta[2]],
                                   b.vertices[tb[0]], b.vertices[tb[1]], b.vertices[tb[2]]);
      best = std::min(best, d);
      if (best <= early_out) return best;
    }
  }
  return best;
}

}  // namespace

Part part_from_world_mesh(TriMesh world, PartLabel label) {
  return make_part(std::move(world), label);
}

PartSet decompose_scene(const TriMesh& mesh, const DecomposeConfig& cfg) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw EmptyMeshError("decompose_scene: empty mesh");

  Aabb3 bb = mesh.bounds();
  double diag = bb.extent().norm();
  double weld_eps = cfg.weld_eps >= 0.0 ? cfg.weld_eps : 1e-4 * diag;

  TriMesh welded = weld_vertices(mesh, weld_eps);
  size_t total_vertices = welded.vertices.size();
  std::vector<TriMesh> comps = connected_components(welded);

  // Ground detection: largest projected area among near-horizontal
  // components; confidence = its share of the total projected area.
  int ground = -1;
  double ground_area = 0.0, total_proj = 0.0;
  std::vector<double> proj(comps.size());
  for (size_t i = 0; i < comps.size(); ++i) {
    proj[i] = projected_area(comps[i]);
    total_proj += proj[i];
    if (median_slope_deg(comps[i]) < 15.0 && proj[i] > ground_area) {
      ground_area = proj[i];
      ground = (int)i;
    }
  }
  // The ground must dominate: an isolated horizontal object does not
  // count when it is not the largest component overall.
  if (ground >= 0) {
    double max_proj = *std::max_element(proj.begin(), proj.end());
    if (proj[ground] < max_proj) ground = -1;
  }
  double confidence = (ground >= 0 && total_proj > 0.0) ? proj[ground] / total_proj : 0.0;

  // Overlay merge: thin components resting on the ground.
  std::vector<char> overlay(comps.size(), 0);
  if (ground >= 0) {
    Aabb3 gb = comps[ground].bounds();
    for (size_t i = 0; i < comps.size(); ++i) {
      if ((int)i == ground) continue;
      Aabb3 cb = comps[i].bounds();
      if (cb.extent().z >= cfg.overlay_thickness) continue;
      if (cb.min.z < gb.min.z - cfg.overlay_thickness) continue;
      if (mesh_min_distance(comps[i], comps[ground], weld_eps) <= weld_eps * 2.0)
        overlay[i] = 1;
    }
  }

  // Iterative small-part merge: objects below the vertex threshold merge
  // into the nearest object by centroid distance; the ground is neither
  // a source nor a target.
  struct Blob {
    TriMesh mesh;
    bool is_ground = false;
    bool has_overlay = false;
  };
  std::vector<Blob> blobs;
  int ground_blob = -1;
  for (size_t i = 0; i < comps.size(); ++i) {
    if ((int)i == ground) {
      ground_blob = (int)blobs.size();
      blobs.push_back({std::move(comps[i]), true, false});
    } else if (overlay[i]) {
      blobs.push_back({std::move(comps[i]), false, true});
    } else {
      blobs.push_back({std::move(comps[i]), false, false});
    }
  }
  // Fold overlays into the ground blob.
  if (ground_blob >= 0) {
    for (auto& b : blobs) {
      if (!b.has_overlay) continue;
      blobs[ground_blob].mesh.append(b.mesh);
      blobs[ground_blob].has_overlay = true;
      b.mesh = TriMesh{};
    }
    blobs.erase(std::remove_if(blobs.begin() + 0, blobs.end(),
                               [](const Blob& b) {
                                 return b.mesh.triangles.empty() && !b.is_ground;
                               }),
                blobs.end());
  }

  size_t threshold =
      (size_t)std::ceil(cfg.small_part_vertex_fraction * (double)total_vertices);
  bool merged = true;
  while (merged) {
    merged = false;
    // find the smallest sub-threshold object
    int smallest = -1;
    size_t smallest_n = std::numeric_limits<size_t>::max();
    for (size_t i = 0; i < blobs.size(); ++i) {
      if (blobs[i].is_ground) continue;
      size_t n = blobs[i].mesh.vertices.size();
      if (n < threshold && n < smallest_n) {
        smallest = (int)i;
        smallest_n = n;
      }
    }
    if (smallest < 0) break;
    // nearest object neighbor by centroid
    auto centroid = [](const TriMesh& m) {
      Vec3 c{};
      for (const auto& v : m.vertices) c = c + v;
      return m.vertices.empty() ? c : c / (double)m.vertices.size();
    };
    Vec3 sc = centroid(blobs[smallest].mesh);
    int target = -1;
    double best_d = 1e300;
    for (size_t i = 0; i < blobs.size(); ++i) {
      if ((int)i == smallest || blobs[i].is_ground) continue;
      double d = (centroid(blobs[i].mesh) - sc).norm();
      if (d < best_d) {
        best_d = d;
        target = (int)i;
      }
    }
    if (target < 0) break;  // nothing to merge into; keep as-is
    blobs[target].mesh.append(blobs[smallest].mesh);
    blobs.erase(blobs.begin() + smallest);
    merged = true;
  }

  PartSet ps;
  ps.ground_confidence = confidence;
  for (auto& b : blobs) {
    PartLabel label = b.is_ground ? PartLabel::Ground : PartLabel::Object;
    Part p = make_part(std::move(b.mesh), label);
    if (b.is_ground) ps.ground_index = (int)ps.parts.size();
    ps.parts.push_back(std::move(p));
  }
  return ps;
}

FilterVerdict quality_filter(const PartSet& ps, const DecomposeConfig& cfg) {
  FilterVerdict v;
  int n = (int)ps.parts.size();
  if (n < cfg.filters.min_parts || n > cfg.filters.max_parts) {
    v.accept = false;
    v.reasons.push_back("part_count");
  }
  size_t vmin = std::numeric_limits<size_t>::max(), vmax = 0;
  for (const auto& p : ps.parts) {
    if (p.label == PartLabel::Ground) continue;
    vmin = std::min(vmin, (size_t)p.vertex_count);
    vmax = std::max(vmax, (size_t)p.vertex_count);
  }
  if (vmax > 0 && vmin > 0 &&
      (double)vmax / (double)vmin > cfg.filters.max_imbalance_ratio) {
    v.accept = false;
    v.reasons.push_back("imbalance");
  }
  if (ps.ground_confidence < cfg.filters.min_ground_confidence) {
    v.accept = false;
    v.reasons.push_back("ground_confidence");
  }
  return v;
}

std::vector<int> part_contact_degrees(const PartSet& ps, double contact_eps) {
  int n = (int)ps.parts.size();
  std::vector<TriMesh> world(n);
  std::vector<Aabb3> boxes(n);
  for (int i = 0; i < n; ++i) {
    world[i] = ps.parts[i].world_mesh();
    boxes[i] = world[i].bounds();
  }
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!boxes[i].overlaps(boxes[j], contact_eps)) continue;
      if (mesh_min_distance(world[i], world[j], contact_eps) <= contact_eps) {
        ++degree[i];
        ++degree[j];
      }
    }
  return degree;
}

std::vector<int> connectivity_degree_order(const PartSet& ps, double contact_eps) {
  if (ps.parts.empty()) throw EmptySetError("connectivity_degree_order: no parts");
  std::vector<int> degree = part_contact_degrees(ps, contact_eps);
  std::vector<double> proj(ps.parts.size());
  for (size_t i = 0; i < ps.parts.size(); ++i)
    proj[i] = projected_area(ps.parts[i].mesh);
  std::vector<int> order(ps.parts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    if (proj[a] != proj[b]) return proj[a] > proj[b];
    return a < b;
  });
  return order;
}

void pivot_remainder_split(const PartSet& ps, int pivot_count, double contact_eps,
                           std::vector<int>& pivot_ids, PartSet& remainder) {
  if (pivot_count < 0) throw BadParamsError("pivot_remainder_split: negative pivot count");
  std::vector<int> order = connectivity_degree_order(ps, contact_eps);
  pivot_ids.assign(order.begin(),
                   order.begin() + std::min((size_t)pivot_count, order.size()));

  // Union of the non-pivot parts, re-split by connected components.
  TriMesh rest;
  for (size_t k = (size_t)pivot_count; k < order.size(); ++k)
    rest.append(ps.parts[order[k]].world_mesh());
  remainder = PartSet{};
  if (rest.triangles.empty()) return;
  for (auto& comp : connected_components(rest))
    remainder.parts.push_back(make_part(std::move(comp), PartLabel::Object));
}

void write_decompose_report(const PartSet& ps, const DecomposeConfig& cfg,
                            const std::string& path) {
  using nlohmann::json;
  json j;
  j["ground_confidence"] = ps.ground_confidence;
  j["ground_index"] = ps.ground_index;
  double contact_eps =
      (cfg.weld_eps > 0.0 ? cfg.weld_eps : 1e-4) * 10.0;
  std::vector<int> degrees = part_contact_degrees(ps, contact_eps);
  j["parts"] = json::array();
  for (size_t i = 0; i < ps.parts.size(); ++i) {
    const Part& p = ps.parts[i];
    const char* label = p.label == PartLabel::Ground
                            ? "ground"
                            : (p.label == PartLabel::OverlayMerged ? "overlay-merged"
                                                                   : "object");
    j["parts"].push_back({{"id", i},
                          {"label", label},
                          {"vertices", p.vertex_count},
                          {"area", p.area},
                          {"volume_proxy", p.volume_proxy},
                          {"degree", degrees[i]},
                          {"pose", {p.pose.x, p.pose.y, p.pose.z}}});
  }
  FilterVerdict v = quality_filter(ps, cfg);
  j["filter"] = {{"accept", v.accept}, {"reasons", v.reasons}};
  std::ofstream f(path);
  if (!f) throw IoError("write_decompose_report: cannot open " + path);
  f << j.dump(2);
}

}  // namespace worldgen
