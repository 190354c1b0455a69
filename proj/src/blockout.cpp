#include "worldgen/blockout.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "worldgen/errors.hpp"

namespace worldgen {

namespace {

TriMesh make_box(const Placement& p, double base_z) {
  TriMesh m;
  double cs = std::cos(p.yaw), sn = std::sin(p.yaw);
  for (int k = 0; k < 8; ++k) {
    double lx = (k & 1) ? p.half_x : -p.half_x;
    double ly = (k & 2) ? p.half_y : -p.half_y;
    double lz = (k & 4) ? p.height : 0.0;
    m.vertices.push_back({p.center.x + lx * cs - ly * sn,
                          p.center.y + lx * sn + ly * cs, base_z + lz});
  }
  // 12 triangles, outward-facing.
  const int faces[12][3] = {
      {0, 2, 1}, {1, 2, 3},  // bottom (z-)
      {4, 5, 6}, {5, 7, 6},  // top (z+)
      {0, 1, 4}, {1, 5, 4},  // y-
      {2, 6, 3}, {3, 6, 7},  // y+
      {0, 4, 2}, {2, 4, 6},  // x-
      {1, 3, 5}, {3, 7, 5},  // x+
  };
  for (const auto& fc : faces) m.triangles.push_back({fc[0], fc[1], fc[2]});
  return m;
}

double pad_height(const HeightField& hf, const Placement& p) {
  // Matches smooth_under_footprints: mean over the one-cell-dilated pad.
  Rect fp = p.world_aabb();
  const int n = hf.resolution;
  const double cs = hf.cell_size;
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
  return count > 0 ? sum / count : 0.0;
}

}  // namespace

TriMesh Blockout::combined() const {
  TriMesh m = ground;
  for (size_t i = 0; i < boxes.size(); ++i) {
    TriMesh b = boxes[i];
    b.part_names.push_back("box_" + std::to_string(i));
    b.tri_part.assign(b.triangles.size(), 0);
    m.append(b);
  }
  return m;
}

Blockout assemble_blockout(const HeightField& hf, const PlacementSet& ps) {
  Blockout b;
  b.heightfield = hf;
  b.placements = ps.placements;
  b.ground = heightfield_to_mesh(hf);
  for (auto& p : b.placements) {
    double base = pad_height(hf, p);
    p.base_z = base;  // keep the recorded support height in sync
    b.boxes.push_back(make_box(p, base));
  }
  b.bounds = b.ground.bounds();
  for (const auto& box : b.boxes)
    for (const auto& v : box.vertices) b.bounds.expand(v);
  return b;
}

Blockout apply_edits(const Blockout& b, const EditScript& edits) {
  if (edits.empty()) return b;
  HeightField hf = b.heightfield;
  std::vector<Placement> placements = b.placements;
  std::vector<char> removed(placements.size(), 0);

  for (const auto& e : edits) {
    switch (e.kind) {
      case Edit::Kind::RemoveBox:
        if (e.box_id < 0 || e.box_id >= (int)placements.size() || removed[e.box_id])
          throw UnknownIdError("apply_edits: unknown box id " + std::to_string(e.box_id));
        removed[e.box_id] = 1;
        break;
      case Edit::Kind::SetBoxHeight:
        if (e.box_id < 0 || e.box_id >= (int)placements.size() || removed[e.box_id])
          throw UnknownIdError("apply_edits: unknown box id " + std::to_string(e.box_id));
        placements[e.box_id].height = e.height;
        break;
      case Edit::Kind::OffsetTerrain: {
        const int n = hf.resolution;
        const double cs = hf.cell_size;
        int i0 = std::clamp((int)std::floor((e.rect.min.x - hf.origin.x) / cs), 0, n - 1);
        int i1 = std::clamp((int)std::ceil((e.rect.max.x - hf.origin.x) / cs), 0, n - 1);
        int j0 = std::clamp((int)std::floor((e.rect.min.y - hf.origin.y) / cs), 0, n - 1);
        int j1 = std::clamp((int)std::ceil((e.rect.max.y - hf.origin.y) / cs), 0, n - 1);
        for (int j = j0; j <= j1; ++j)
          for (int i = i0; i <= i1; ++i) hf.at(i, j) += e.dz;
        break;
      }
    }
  }

  PlacementSet ps;
  ps.extent = hf.extent();
  for (size_t i = 0; i < placements.size(); ++i)
    if (!removed[i]) ps.placements.push_back(placements[i]);
  return assemble_blockout(hf, ps);
}

EditScript parse_edit_script(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string("edit script: malformed JSON: ") + e.what());
  }
  if (!j.is_array()) throw SchemaError("edit script: expected array");
  EditScript script;
  for (const auto& item : j) {
    std::string op = item.value("op", "");
    Edit e;
    if (op == "remove_box") {
      e.kind = Edit::Kind::RemoveBox;
      e.box_id = item.at("id").get<int>();
    } else if (op == "set_box_height") {
      e.kind = Edit::Kind::SetBoxHeight;
      e.box_id = item.at("id").get<int>();
      e.height = item.at("height").get<double>();
    } else if (op == "offset_terrain") {
      e.kind = Edit::Kind::OffsetTerrain;
      auto r = item.at("rect");
      e.rect = {{r.at(0).get<double>(), r.at(1).get<double>()},
                {r.at(2).get<double>(), r.at(3).get<double>()}};
      e.dz = item.at("dz").get<double>();
    } else {
      throw SchemaError("edit script: unknown op '" + op + "'");
    }
    script.push_back(e);
  }
  return script;
}

Vec3 ground_plane_centroid(const TriMesh& navmesh) {
  if (navmesh.triangles.empty())
    throw DegenerateBoundsError("ground_plane_centroid: empty navmesh");
  const double slope_cos = std::cos(5.0 * 3.14159265358979323846 / 180.0);

  double zmin = 1e300, zmax = -1e300;
  for (const auto& v : navmesh.vertices) {
    zmin = std::min(zmin, v.z);
    zmax = std::max(zmax, v.z);
  }
  // Lowest elevation band: 10% of the z-range (nonzero floor for flat
  // meshes).
  double band = std::max((zmax - zmin) * 0.1, 1e-9);

  Vec3 acc{};
  double wsum = 0.0;
  for (int t = 0; t < (int)navmesh.triangles.size(); ++t) {
    Vec3 n = navmesh.triangle_normal(t);
    double len = n.norm();
    if (len <= 0.0) continue;
    if (std::abs(n.z) / len < slope_cos) continue;  // not near-horizontal
    const auto& tri = navmesh.triangles[t];
    Vec3 c = (navmesh.vertices[tri[0]] + navmesh.vertices[tri[1]] +
              navmesh.vertices[tri[2]]) / 3.0;
    if (c.z > zmin + band) continue;
    double area = 0.5 * len;
    acc = acc + c * area;
    wsum += area;
  }
  if (wsum <= 0.0) {
    // No horizontal cluster found; fall back to the lowest vertex band
    // centroid so normalization still succeeds.
    Vec3 s{};
    int n = 0;
    for (const auto& v : navmesh.vertices)
      if (v.z <= zmin + band) {
        s = s + v;
        ++n;
      }
    return n > 0 ? s / (double)n : Vec3{};
  }
  return acc / wsum;
}

namespace {

ScaleTranslate normalization_from(const Aabb3& scale_bounds, const Vec3& anchor) {
  if (scale_bounds.empty())
    throw DegenerateBoundsError("normalize_scene: empty bounds");
  // Largest absolute coordinate once the anchor sits at the origin; using
  // the reach (not the raw extent) keeps the anchored scene inside the
  // cube even when the anchor is off-center.
  double reach = 0.0;
  reach = std::max(reach, std::abs(scale_bounds.min.x - anchor.x));
  reach = std::max(reach, std::abs(scale_bounds.max.x - anchor.x));
  reach = std::max(reach, std::abs(scale_bounds.min.y - anchor.y));
  reach = std::max(reach, std::abs(scale_bounds.max.y - anchor.y));
  reach = std::max(reach, std::abs(scale_bounds.min.z - anchor.z));
  reach = std::max(reach, std::abs(scale_bounds.max.z - anchor.z));
  if (reach <= 0.0)
    throw DegenerateBoundsError("normalize_scene: zero-extent mesh");
  // 2% margin inside the unit cube.
  double scale = 0.98 / reach;
  ScaleTranslate xf;
  xf.scale = scale;
  xf.translation = anchor * (-scale);
  return xf;
}

void apply_transform(TriMesh& m, const ScaleTranslate& xf) {
  for (auto& v : m.vertices) v = xf.apply(v);
}

}  // namespace

ScaleTranslate normalize_scene(TriMesh& scene, TriMesh& navmesh) {
  if (scene.vertices.empty() || navmesh.vertices.empty())
    throw DegenerateBoundsError("normalize_scene: empty mesh");
  ScaleTranslate xf = normalization_from(scene.bounds(), ground_plane_centroid(navmesh));
  apply_transform(scene, xf);
  apply_transform(navmesh, xf);
  return xf;
}

ScaleTranslate normalize_with_reference(TriMesh& navmesh, const Aabb3& reference_bounds) {
  if (navmesh.vertices.empty())
    throw DegenerateBoundsError("normalize_with_reference: empty navmesh");
  ScaleTranslate xf = normalization_from(reference_bounds, ground_plane_centroid(navmesh));
  apply_transform(navmesh, xf);
  return xf;
}

}  // namespace worldgen
