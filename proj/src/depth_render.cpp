#include "worldgen/depth_render.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "worldgen/errors.hpp"
#include "worldgen/image_io.hpp"
#include "worldgen/rng.hpp"

namespace worldgen {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kElevation = 45.0 * kPi / 180.0;

void camera_frame(double azimuth, Vec3& forward, Vec3& right, Vec3& up) {
  // Looking down at the scene from elevation 45 degrees.
  forward = {std::cos(azimuth) * std::cos(kElevation),
             std::sin(azimuth) * std::cos(kElevation), -std::sin(kElevation)};
  right = {-std::sin(azimuth), std::cos(azimuth), 0.0};
  up = right.cross(forward);  // points "screen up"
}

struct ProjVert {
  double u, v, d;
};

}  // namespace

DepthMap render_depth(const Blockout& b, double azimuth, int resolution,
                      DepthCamera* camera_out) {
  TriMesh mesh = b.combined();
  if (mesh.triangles.empty())
    throw BadParamsError("render_depth: empty blockout");

  DepthCamera cam;
  camera_frame(azimuth, cam.forward, cam.right, cam.up);

  double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300, dmin = 1e300;
  for (const auto& p : mesh.vertices) {
    double u = p.dot(cam.right), v = p.dot(cam.up), d = p.dot(cam.forward);
    umin = std::min(umin, u); umax = std::max(umax, u);
    vmin = std::min(vmin, v); vmax = std::max(vmax, v);
    dmin = std::min(dmin, d);
  }
  double mu = 0.05 * std::max(umax - umin, 1e-9);
  double mv = 0.05 * std::max(vmax - vmin, 1e-9);
  cam.frame_min_u = umin - mu; cam.frame_max_u = umax + mu;
  cam.frame_min_v = vmin - mv; cam.frame_max_v = vmax + mv;
  cam.near_plane = dmin - 0.05 * std::max(umax - umin, vmax - vmin);

  DepthMap dm;
  dm.width = dm.height = resolution;
  dm.depth.assign((size_t)resolution * resolution, std::numeric_limits<double>::infinity());
  dm.terrain_mask.assign((size_t)resolution * resolution, 0);
  std::vector<int> winner((size_t)resolution * resolution, -1);

  const double su = (cam.frame_max_u - cam.frame_min_u) / resolution;
  const double sv = (cam.frame_max_v - cam.frame_min_v) / resolution;

  int ground_part = -1;
  for (int p = 0; p < (int)mesh.part_names.size(); ++p)
    if (mesh.part_names[p] == "ground") ground_part = p;

  for (int t = 0; t < (int)mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    ProjVert pv[3];
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertices[tri[k]];
      // pixel space: x right, y down (v flipped)
      pv[k].u = (p.dot(cam.right) - cam.frame_min_u) / su;
      pv[k].v = (cam.frame_max_v - p.dot(cam.up)) / sv;
      pv[k].d = p.dot(cam.forward) - cam.near_plane;
    }
    double area2 = (pv[1].u - pv[0].u) * (pv[2].v - pv[0].v) -
                   (pv[2].u - pv[0].u) * (pv[1].v - pv[0].v);
    if (area2 == 0.0) continue;

    double minx = std::min({pv[0].u, pv[1].u, pv[2].u});
    double maxx = std::max({pv[0].u, pv[1].u, pv[2].u});
    double miny = std::min({pv[0].v, pv[1].v, pv[2].v});
    double maxy = std::max({pv[0].v, pv[1].v, pv[2].v});
    int x0 = std::max(0, (int)std::floor(minx));
    int x1 = std::min(resolution - 1, (int)std::ceil(maxx));
    int y0 = std::max(0, (int)std::floor(miny));
    int y1 = std::min(resolution - 1, (int)std::ceil(maxy));

    // Edge functions; orientation-normalized so inside tests are uniform.
    double sign = area2 > 0.0 ? 1.0 : -1.0;
    auto edge = [&](const ProjVert& a, const ProjVert& bb, double px, double py) {
      return sign * ((bb.u - a.u) * (py - a.v) - (bb.v - a.v) * (px - a.u));
    };
    // Top-left rule per edge.
    auto top_left = [&](const ProjVert& a, const ProjVert& bb) {
      double ex = sign * (bb.u - a.u), ey = sign * (bb.v - a.v);
      return (ey == 0.0 && ex > 0.0) || ey < 0.0;
    };
    bool tl0 = top_left(pv[0], pv[1]), tl1 = top_left(pv[1], pv[2]),
         tl2 = top_left(pv[2], pv[0]);

    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        double px = x + 0.5, py = y + 0.5;
        double e0 = edge(pv[0], pv[1], px, py);
        double e1 = edge(pv[1], pv[2], px, py);
        double e2 = edge(pv[2], pv[0], px, py);
        bool in = (e0 > 0.0 || (e0 == 0.0 && tl0)) && (e1 > 0.0 || (e1 == 0.0 && tl1)) &&
                  (e2 > 0.0 || (e2 == 0.0 && tl2));
        if (!in) continue;
        double denom = e0 + e1 + e2;
        double b0 = e1 / denom, b1 = e2 / denom, b2 = e0 / denom;
        double d = b0 * pv[0].d + b1 * pv[1].d + b2 * pv[2].d;
        size_t idx = (size_t)y * resolution + x;
        if (d < dm.depth[idx] || (d == dm.depth[idx] && t < winner[idx])) {
          dm.depth[idx] = d;
          winner[idx] = t;
          bool is_ground = mesh.has_parts() ? mesh.tri_part[t] == ground_part : true;
          dm.terrain_mask[idx] = is_ground ? 1 : 0;
        }
      }
  }

  if (camera_out) *camera_out = cam;
  return dm;
}

DepthMap perturb_depth(const DepthMap& dm, double sigma_rel, uint64_t seed) {
  if (sigma_rel < 0.0) throw BadParamsError("perturb_depth: sigma_rel must be >= 0");
  if (sigma_rel == 0.0) return dm;
  DepthMap out = dm;
  Rng rng(hash_combine(seed, 0x70657274ull));
  for (size_t i = 0; i < out.depth.size(); ++i) {
    if (out.terrain_mask[i] || !std::isfinite(out.depth[i])) continue;
    double eps = rng.normal() * sigma_rel;
    double d = out.depth[i] * (1.0 + eps);
    out.depth[i] = std::max(d, out.depth[i] * 1e-6);
  }
  return out;
}

void write_depth_png(const DepthMap& dm, const std::string& path,
                     const DepthCamera* camera, double sigma_rel, uint64_t seed,
                     double azimuth) {
  double dmin = 1e300, dmax = -1e300;
  for (double d : dm.depth)
    if (std::isfinite(d)) {
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
  bool any = dmax >= dmin;
  double range = any ? std::max(dmax - dmin, 0.0) : 0.0;

  std::vector<uint16_t> px(dm.depth.size(), 0);
  for (size_t i = 0; i < dm.depth.size(); ++i) {
    double d = dm.depth[i];
    if (!std::isfinite(d)) continue;
    double t = range > 0.0 ? (d - dmin) / range : 0.0;
    px[i] = (uint16_t)(1 + std::lround(t * 65534.0));
  }
  write_png16(path, dm.width, dm.height, px);

  nlohmann::json j;
  j["width"] = dm.width;
  j["height"] = dm.height;
  j["depth_min"] = any ? dmin : 0.0;
  j["depth_max"] = any ? dmax : 0.0;
  j["value_range"] = {1, 65535};
  j["background_value"] = 0;
  j["sigma_rel"] = sigma_rel;
  j["seed"] = seed;
  j["azimuth"] = azimuth;
  j["elevation_deg"] = 45.0;
  if (camera) {
    j["camera"] = {{"forward", {camera->forward.x, camera->forward.y, camera->forward.z}},
                   {"right", {camera->right.x, camera->right.y, camera->right.z}},
                   {"up", {camera->up.x, camera->up.y, camera->up.z}},
                   {"frame_u", {camera->frame_min_u, camera->frame_max_u}},
                   {"frame_v", {camera->frame_min_v, camera->frame_max_v}},
                   {"near_plane", camera->near_plane}};
  }
  std::ofstream f(path + ".json");
  if (!f) throw IoError("write_depth_png: cannot open sidecar for " + path);
  f << j.dump(2);
  if (!f) throw IoError("write_depth_png: sidecar write failed for " + path);
}

DepthMap read_depth_png(const std::string& png_path) {
  std::ifstream f(png_path + ".json");
  if (!f) throw IoError("read_depth_png: missing sidecar for " + png_path);
  nlohmann::json j = nlohmann::json::parse(f);
  int w = 0, h = 0;
  auto px = read_png16(png_path, w, h);
  DepthMap dm;
  dm.width = w;
  dm.height = h;
  dm.depth.assign(px.size(), std::numeric_limits<double>::infinity());
  dm.terrain_mask.assign(px.size(), 0);
  double dmin = j.at("depth_min").get<double>();
  double dmax = j.at("depth_max").get<double>();
  double range = dmax - dmin;
  for (size_t i = 0; i < px.size(); ++i) {
    if (px[i] == 0) continue;
    double t = (px[i] - 1) / 65534.0;
    dm.depth[i] = dmin + t * range;
  }
  return dm;
}

double pick_azimuth(const Blockout& b, int resolution) {
  if (b.placements.empty()) return 0.0;
  double best_az = 0.0;
  int best_visible = -1;
  for (int k = 0; k < 8; ++k) {
    double az = k * (2.0 * kPi / 8.0);
    DepthCamera cam;
    DepthMap dm = render_depth(b, az, resolution, &cam);
    const double su = (cam.frame_max_u - cam.frame_min_u) / resolution;
    const double sv = (cam.frame_max_v - cam.frame_min_v) / resolution;
    int visible = 0;
    for (size_t i = 0; i < b.placements.size(); ++i) {
      const auto& p = b.placements[i];
      Vec3 top{p.center.x, p.center.y, b.boxes[i].vertices[4].z};
      int x = (int)((top.dot(cam.right) - cam.frame_min_u) / su);
      int y = (int)((cam.frame_max_v - top.dot(cam.up)) / sv);
      if (x < 0 || y < 0 || x >= resolution || y >= resolution) continue;
      if (!dm.is_terrain(x, y) && std::isfinite(dm.at(x, y))) ++visible;
    }
    if (visible > best_visible) {
      best_visible = visible;
      best_az = az;
    }
  }
  return best_az;
}

}  // namespace worldgen
