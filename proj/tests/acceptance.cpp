// Acceptance suite: ten protocol-correctness and pipeline-invariant
// checks, one pass/fail line each. Exits nonzero when any criterion
// fails or overruns its time budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "worldgen/blockout.hpp"
#include "worldgen/decompose.hpp"
#include "worldgen/depth_render.hpp"
#include "worldgen/mesh_io.hpp"
#include "worldgen/metrics.hpp"
#include "worldgen/navmesh.hpp"
#include "worldgen/rng.hpp"
#include "worldgen/synth_data.hpp"
#include "worldgen/terrain.hpp"

using namespace worldgen;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
  const char* name;
  double limit_s;
  bool (*fn)(std::string&);
};

PointCloud random_cloud(Rng& rng, int n, double spread = 1.0) {
  PointCloud pc;
  for (int i = 0; i < n; ++i)
    pc.points.push_back({rng.uniform(-spread, spread), rng.uniform(-spread, spread),
                         rng.uniform(-spread, spread)});
  return pc;
}

RigidTransform random_rigid(Rng& rng, double max_angle, double max_trans) {
  // Rodrigues rotation about a random axis.
  Vec3 axis{rng.normal(), rng.normal(), rng.normal()};
  axis = axis.normalized();
  double ang = rng.uniform(-max_angle, max_angle);
  double c = std::cos(ang), s = std::sin(ang), t = 1 - c;
  RigidTransform r;
  r.rotation = {{{t * axis.x * axis.x + c, t * axis.x * axis.y - s * axis.z,
                  t * axis.x * axis.z + s * axis.y},
                 {t * axis.x * axis.y + s * axis.z, t * axis.y * axis.y + c,
                  t * axis.y * axis.z - s * axis.x},
                 {t * axis.x * axis.z - s * axis.y, t * axis.y * axis.z + s * axis.x,
                  t * axis.z * axis.z + c}}};
  r.translation = {rng.uniform(-max_trans, max_trans), rng.uniform(-max_trans, max_trans),
                   rng.uniform(-max_trans, max_trans)};
  return r;
}

double rotation_error(const RigidTransform& a, const RigidTransform& b) {
  // Angle of Ra * Rb^T.
  double trace = 0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) trace += a.rotation[i][k] * b.rotation[i][k];
  return std::acos(std::clamp((trace - 1.0) / 2.0, -1.0, 1.0));
}

TriMesh unit_cube() {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  m.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                 {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
  return m;
}

// Randomly squashed cube: still unit-box-normalizable, unique vertices.
TriMesh random_asset(Rng& rng) {
  TriMesh m = unit_cube();
  double sx = rng.uniform(0.5, 1.0), sy = rng.uniform(0.5, 1.0), sz = rng.uniform(0.4, 1.0);
  for (auto& v : m.vertices) {
    v.x *= sx;
    v.y *= sy;
    v.z *= sz;
  }
  return m;
}

std::string hash_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  uint64_t h = 0x811c9dc5ull;
  std::string all;
  for (const auto& p : files) {
    all += fs::relative(p, dir).string();
    std::ifstream f(p, std::ios::binary);
    all.append((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  }
  for (unsigned char c : all) h = (h ^ c) * 0x100000001b3ull;
  return std::to_string(h) + ":" + std::to_string(all.size());
}

SceneSpec random_spec(Rng& rng, int index) {
  SceneSpec s;
  s.seed = hash_combine(1234, (uint64_t)index);
  TerrainKind kinds[] = {TerrainKind::Perlin, TerrainKind::Flat, TerrainKind::Steep,
                         TerrainKind::Plateau};
  PartitionStrategy strats[] = {PartitionStrategy::Bsp,     PartitionStrategy::Grid,
                                PartitionStrategy::Kdtree,  PartitionStrategy::Voronoi,
                                PartitionStrategy::Noise,   PartitionStrategy::Drunkard};
  DensityTier tiers[] = {DensityTier::Low, DensityTier::Medium, DensityTier::High};
  s.terrain.kind = kinds[index % 4];
  s.partition.strategy = strats[index % 6];
  s.density.tier = tiers[index % 3];
  // Re-derive the per-tier default counts for the chosen tier.
  switch (s.density.tier) {
    case DensityTier::Low: s.density = {s.density.tier, 2, 6, 12}; break;
    case DensityTier::Medium: s.density = {s.density.tier, 4, 12, 24}; break;
    case DensityTier::High: s.density = {s.density.tier, 6, 18, 36}; break;
  }
  s.verticality = rng.uniform01();
  s.regularity = rng.uniform01();
  s.partition.region_count_hint = (int)rng.uniform_int(4, 16);
  return s;
}

// ---------------------------------------------------------------- 1
bool metric_oracles(std::string& detail) {
  Rng rng(2024);
  double worst = 0.0;
  for (int it = 0; it < 200; ++it) {
    int na = (int)rng.uniform_int(5, 200), nb = (int)rng.uniform_int(5, 200);
    PointCloud p = random_cloud(rng, na), q = random_cloud(rng, nb);

    auto one_way = [](const PointCloud& a, const PointCloud& b, double tau, int* hits) {
      double s = 0;
      int h = 0;
      for (const auto& x : a.points) {
        double best = 1e300;
        for (const auto& y : b.points) best = std::min(best, (x - y).norm());
        s += best;
        h += best <= tau;
      }
      if (hits) *hits = h;
      return s / a.points.size();
    };
    double tau = rng.uniform(0.05, 0.8);
    int hp = 0, hq = 0;
    double brute_cd = 0.5 * (one_way(p, q, tau, &hp) + one_way(q, p, tau, &hq));
    double pr = (double)hp / p.points.size(), re = (double)hq / q.points.size();
    double brute_f = pr + re == 0 ? 0.0 : 2 * pr * re / (pr + re);

    worst = std::max(worst, std::abs(chamfer(p, q) - brute_cd));
    if (fscore(p, q, tau) != brute_f) {
      detail = "fscore mismatch at pair " + std::to_string(it);
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |cd - oracle| = %.2e", worst);
  detail = buf;
  return worst < 1e-9;
}

// ---------------------------------------------------------------- 2
bool icp_recovery(std::string& detail) {
  Rng rng(77);
  double worst_rot = 0, worst_tr = 0;
  for (int it = 0; it < 100; ++it) {
    PointCloud p = random_cloud(rng, 1000);
    RigidTransform gt = random_rigid(rng, 30.0 * M_PI / 180.0, 0.2);
    PointCloud q;
    for (const auto& v : p.points) q.points.push_back(gt.apply(v));
    IcpResult res = icp_align(p, q);
    for (size_t i = 1; i < res.rms_history.size(); ++i)
      if (res.rms_history[i] > res.rms_history[i - 1] + 1e-12) {
        detail = "rms increased at trial " + std::to_string(it);
        return false;
      }
    worst_rot = std::max(worst_rot, rotation_error(res.transform, gt));
    worst_tr = std::max(worst_tr, (res.transform.translation - gt.translation).norm());
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max rot err %.2e rad, max trans err %.2e", worst_rot,
                worst_tr);
  detail = buf;
  return worst_rot <= 1e-4 && worst_tr <= 1e-5;
}

// ---------------------------------------------------------------- 3
bool navigability(std::string& detail) {
  Rng rng(555);
  double worst_share = 1.0;
  for (int i = 0; i < 100; ++i) {
    SceneSpec spec = random_spec(rng, i);
    GeneratedScene g = generate_scene(spec);
    auto comps = connectivity_components(g.navmesh);
    if (comps.empty()) {
      detail = "no navmesh for spec " + std::to_string(i);
      return false;
    }
    double total = 0;
    for (const auto& c : comps) total += c.second;
    double share = comps[0].second / total;
    worst_share = std::min(worst_share, share);
    int big = 0;
    for (const auto& c : comps) big += c.second / total >= 0.95;
    if (big != 1) {
      detail = "spec " + std::to_string(i) + ": largest share " + std::to_string(share);
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst largest-component share %.4f", worst_share);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------- 4
bool navmesh_cd_self(std::string& detail) {
  SceneSpec spec;
  spec.seed = 404;
  GeneratedScene g = generate_scene(spec);
  TriMesh scene = g.blockout.combined();
  TriMesh gt_nav = g.navmesh.to_mesh();

  NavmeshCdResult base = navmesh_cd_protocol(scene, gt_nav, spec.agent);
  if (!(base.chamfer_distance < 2.0 * base.normalized_cell_size)) {
    detail = "self CD " + std::to_string(base.chamfer_distance);
    return false;
  }

  // Displace the prediction rigidly (yaw + offset keeps walkability).
  RigidTransform d = RigidTransform::rotation_z(0.35);
  d.translation = {6.0, -4.0, 1.5};
  TriMesh moved = scene;
  for (auto& v : moved.vertices) v = d.apply(v);
  NavmeshCdResult disp = navmesh_cd_protocol(moved, gt_nav, spec.agent);
  char buf[96];
  std::snprintf(buf, sizeof buf, "self CD %.4f, displaced CD %.4f (2*cell %.4f)",
                base.chamfer_distance, disp.chamfer_distance,
                2.0 * base.normalized_cell_size);
  detail = buf;
  return disp.chamfer_distance < 2.0 * disp.normalized_cell_size;
}

// ---------------------------------------------------------------- 5
bool planted_decomposition(std::string& detail) {
  Rng rng(31337);
  double worst_f = 1.0, worst_cd = 0.0;
  for (int s = 0; s < 50; ++s) {
    GridSceneSpec gs;
    gs.grid = (s % 2) ? 3 : 2;
    gs.seed = s;
    int cells = gs.grid * gs.grid;
    for (int a = 0; a < cells; ++a) gs.assets.push_back(random_asset(rng));
    TriMesh scene;
    PartSet gt;
    compose_grid_scene(gs, scene, gt);
    PartSet rec = decompose_scene(scene);
    if ((int)rec.parts.size() != cells + 1) {
      detail = "scene " + std::to_string(s) + ": " + std::to_string(rec.parts.size()) +
               " parts, want " + std::to_string(cells + 1);
      return false;
    }
    EvalReport rep = part_match_eval(rec, gt, {0.02}, 2048);
    for (const auto& row : rep.rows) {
      worst_f = std::min(worst_f, row.at("fscore@0.02"));
      worst_cd = std::max(worst_cd, row.at("chamfer"));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst F@0.02 %.4f, worst CD %.2e", worst_f, worst_cd);
  detail = buf;
  return worst_f >= 0.99 && worst_cd <= 1e-3;
}

// ---------------------------------------------------------------- 6
bool degree_ordering(std::string& detail) {
  Rng rng(606);
  for (int trial = 0; trial < 10; ++trial) {
    // Ground plus k touching cubes and a few floating ones.
    int k = (int)rng.uniform_int(2, 6);
    int floating = (int)rng.uniform_int(1, 3);
    TriMesh m;
    TriMesh ground;
    double half = 12.0;
    ground.vertices = {{-half, -half, 0}, {half, -half, 0}, {half, half, 0}, {-half, half, 0}};
    ground.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.append(ground);
    auto add_cube = [&](double cx, double cy, double z0) {
      TriMesh c = unit_cube();
      for (auto& v : c.vertices) v = {v.x + cx, v.y + cy, v.z + z0};
      m.append(c);
    };
    for (int i = 0; i < k; ++i) add_cube(-9.0 + 3.5 * i, -6.0, 0.0);          // touching
    for (int i = 0; i < floating; ++i) add_cube(-9.0 + 3.5 * i, 6.0, 2.0);    // airborne
    PartSet ps = decompose_scene(m);
    if ((int)ps.parts.size() != 1 + k + floating) {
      detail = "trial " + std::to_string(trial) + ": part count off";
      return false;
    }
    double eps = 0.01;
    std::vector<int> deg = part_contact_degrees(ps, eps);
    std::vector<int> order = connectivity_degree_order(ps, eps);
    if (order[0] != ps.ground_index || deg[ps.ground_index] != k) {
      detail = "trial " + std::to_string(trial) + ": ground degree " +
               std::to_string(deg[ps.ground_index]) + " want " + std::to_string(k);
      return false;
    }
    // Brute-force pairwise contact oracle.
    for (size_t i = 0; i < ps.parts.size(); ++i) {
      TriMesh wi = ps.parts[i].world_mesh();
      int expect = 0;
      for (size_t j = 0; j < ps.parts.size(); ++j) {
        if (i == j) continue;
        TriMesh wj = ps.parts[j].world_mesh();
        double best = 1e300;
        for (const auto& ta : wi.triangles)
          for (const auto& tb : wj.triangles)
            best = std::min(best,
                            triangle_distance(wi.vertices[ta[0]], wi.vertices[ta[1]],
                                              wi.vertices[ta[2]], wj.vertices[tb[0]],
                                              wj.vertices[tb[1]], wj.vertices[tb[2]]));
        expect += best <= eps;
      }
      if (deg[i] != expect) {
        detail = "degree mismatch vs oracle";
        return false;
      }
    }
    // Pivot/remainder with the default of four pivots partitions the set.
    std::vector<int> pivots;
    PartSet remainder;
    pivot_remainder_split(ps, 4, eps, pivots, remainder);
    size_t pv = 0, rv = 0, av = 0;
    for (int id : pivots) pv += ps.parts[id].mesh.vertices.size();
    for (const auto& p : remainder.parts) rv += p.mesh.vertices.size();
    for (const auto& p : ps.parts) av += p.mesh.vertices.size();
    if (pv + rv != av || pivots.size() != std::min<size_t>(4, ps.parts.size())) {
      detail = "pivot/remainder not a disjoint cover";
      return false;
    }
  }
  detail = "degrees match oracle on 10 planted scenes";
  return true;
}

// ---------------------------------------------------------------- 7
bool normalization_invariants(std::string& detail) {
  Rng rng(700);
  for (int i = 0; i < 8; ++i) {
    SceneSpec spec = random_spec(rng, i);
    spec.seed = 9000 + i;
    GeneratedScene g = generate_scene(spec);
    TriMesh scene = g.blockout.combined();
    TriMesh nav = g.navmesh.to_mesh();
    normalize_scene(scene, nav);
    Aabb3 bb = scene.bounds();
    double over = std::max({std::abs(bb.min.x), std::abs(bb.max.x), std::abs(bb.min.y),
                            std::abs(bb.max.y), std::abs(bb.min.z), std::abs(bb.max.z)});
    if (over > 1.0 + 1e-9) {
      detail = "bounds exceed the unit cube: " + std::to_string(over);
      return false;
    }
    if (ground_plane_centroid(nav).norm() > 1e-6) {
      detail = "ground centroid off origin";
      return false;
    }
    ScaleTranslate again = normalize_scene(scene, nav);
    if (std::abs(again.scale - 1.0) > 1e-9 || again.translation.norm() > 1e-9) {
      detail = "not idempotent";
      return false;
    }
  }
  detail = "8 scenes normalized, anchored, idempotent";
  return true;
}

// ---------------------------------------------------------------- 8
bool depth_analytic(std::string& detail) {
  // Single centered box on flat terrain.
  SceneSpec spec;
  spec.terrain.kind = TerrainKind::Flat;
  spec.terrain.elevation_range = {0.0, 0.0};
  spec.extent = 20.0;
  HeightField hf = generate_heightfield(spec, 1);
  PlacementSet ps = empty_placement_set(spec.extent);
  Placement box;
  box.tier = Tier::Hero;
  box.center = {10.0, 10.0};
  box.half_x = box.half_y = 7.0;
  box.height = 3.0;
  ps.placements.push_back(box);
  Blockout b = assemble_blockout(hf, ps);

  const int res = 257;  // odd: a well-defined center pixel
  DepthCamera cam;
  DepthMap dm = render_depth(b, 0.0, res, &cam);
  int cx = res / 2, cy = res / 2;
  double got = dm.at(cx, cy);
  if (!std::isfinite(got) || dm.is_terrain(cx, cy)) {
    detail = "center pixel missed the box top";
    return false;
  }
  // Analytic orthographic ray: pixel -> frame (u, v), intersect z = 3.
  double u = cam.frame_min_u + (cx + 0.5) / res * (cam.frame_max_u - cam.frame_min_u);
  double v = cam.frame_max_v - (cy + 0.5) / res * (cam.frame_max_v - cam.frame_min_v);
  double s = (3.0 - (u * cam.right.z + v * cam.up.z)) / cam.forward.z;
  Vec3 hit = cam.right * u + cam.up * v + cam.forward * s;
  if (std::abs(hit.x - 10.0) > 6.9 || std::abs(hit.y - 10.0) > 6.9 ||
      std::abs(hit.z - 3.0) > 1e-9) {
    detail = "analytic ray left the top face";
    return false;
  }
  double expect = s - cam.near_plane;
  double cell = (cam.frame_max_u - cam.frame_min_u) / res;
  if (std::abs(got - expect) > 0.5 * cell) {
    detail = "center depth " + std::to_string(got) + " vs analytic " + std::to_string(expect);
    return false;
  }

  // Noise statistics over a box-dominated high-res render.
  Placement slab;
  slab.tier = Tier::Hero;
  slab.center = {10.0, 10.0};
  slab.half_x = slab.half_y = 9.5;
  slab.height = 2.0;
  PlacementSet ps2 = empty_placement_set(spec.extent);
  ps2.placements.push_back(slab);
  Blockout b2 = assemble_blockout(hf, ps2);
  DepthMap big = render_depth(b2, 0.3, 768);
  const double sigma = 0.02;
  DepthMap noisy = perturb_depth(big, sigma, 99);
  double sum = 0, sum2 = 0;
  long n = 0;
  for (int y = 0; y < big.height; ++y)
    for (int x = 0; x < big.width; ++x) {
      size_t i = (size_t)y * big.width + x;
      if (big.is_terrain(x, y)) {
        if (noisy.depth[i] != big.depth[i]) {
          detail = "terrain pixel changed";
          return false;
        }
        continue;
      }
      if (!std::isfinite(big.depth[i])) continue;
      double r = noisy.depth[i] / big.depth[i] - 1.0;
      sum += r;
      sum2 += r * r;
      ++n;
    }
  if (n < 100000) {
    detail = "only " + std::to_string(n) + " box pixels";
    return false;
  }
  double mean = sum / n;
  double sd = std::sqrt(sum2 / n - mean * mean);
  char buf[96];
  std::snprintf(buf, sizeof buf, "analytic depth ok; noise sd %.5f over %ld px", sd, n);
  detail = buf;
  return std::abs(sd - sigma) <= 0.1 * sigma;
}

// ---------------------------------------------------------------- 9
bool benchmark_regime(std::string& detail) {
  SceneSpec tmpl;
  BenchmarkConfig cfg;
  cfg.n_scenes = 50;
  cfg.depth_resolution = 128;
  cfg.jobs = 4;
  fs::remove_all("/tmp/wg_acc_bench_a");
  fs::remove_all("/tmp/wg_acc_bench_b");
  build_benchmark("/tmp/wg_acc_bench_a", tmpl, 2026, cfg);
  build_benchmark("/tmp/wg_acc_bench_b", tmpl, 2026, cfg);
  if (hash_dir("/tmp/wg_acc_bench_a") != hash_dir("/tmp/wg_acc_bench_b")) {
    detail = "rerun differs";
    return false;
  }
  int min_count = 1 << 30, max_count = 0;
  AgentParams agent;
  for (int i = 0; i < 50; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "/tmp/wg_acc_bench_a/scene_%03d", i);
    std::ifstream mf(fs::path(name) / "manifest.json");
    std::string text((std::istreambuf_iterator<char>(mf)), std::istreambuf_iterator<char>());
    auto pos = text.find("\"object_count\": ");
    int count = std::atoi(text.c_str() + pos + 16);
    min_count = std::min(min_count, count);
    max_count = std::max(max_count, count);
    if (count < 10 || count > 30) {
      detail = std::string(name) + ": object count " + std::to_string(count);
      return false;
    }
    // Navigability of the emitted scene geometry.
    TriMesh scene = import_obj((fs::path(name) / "scene.obj").string());
    Vec3 e = scene.bounds().extent();
    NavMesh nm = bake_navmesh(scene, agent, std::max({e.x, e.y, e.z}) / 256.0);
    auto comps = connectivity_components(nm);
    double total = 0;
    for (const auto& c : comps) total += c.second;
    int big = 0;
    for (const auto& c : comps) big += c.second / total >= 0.95;
    if (big != 1) {
      detail = std::string(name) + ": navigability violated";
      return false;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "50 scenes, counts in [%d, %d], rerun identical",
                min_count, max_count);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------- 10
bool determinism_sweep(std::string& detail) {
  SceneSpec spec;
  spec.seed = 4242;
  auto emit_all = [&](const std::string& root) {
    GeneratedScene g = generate_scene(spec);
    write_scene_dir(root + "/gen", g, 128);
    // Edited variant.
    EditScript edits{Edit{Edit::Kind::RemoveBox, 0, 0, {}, 0}};
    GeneratedScene e = g;
    e.blockout = apply_edits(g.blockout, edits);
    e.navmesh = bake_navmesh(e.blockout.combined(), spec.agent, e.navmesh_cell_size);
    write_scene_dir(root + "/edit", e, 128);
    // Perturbed depth render.
    DepthCamera cam;
    DepthMap dm = render_depth(g.blockout, 0.4, 200, &cam);
    dm = perturb_depth(dm, 0.02, 7);
    write_depth_png(dm, root + "/depth.png", &cam, 0.02, 7, 0.4);
    // Grid scene artifacts.
    GridSceneSpec gs;
    gs.grid = 3;
    Rng arng(3);
    for (int i = 0; i < 9; ++i) gs.assets.push_back(random_asset(arng));
    TriMesh scene;
    PartSet parts;
    compose_grid_scene(gs, scene, parts);
    export_mesh(scene, MeshFormat::Obj, root + "/grid.obj");
    export_mesh(scene, MeshFormat::Gltf, root + "/grid.gltf");
    export_navmesh_obj(g.navmesh, root + "/nav.obj");
    export_navmesh_json(g.navmesh, root + "/nav.json");
  };
  fs::remove_all("/tmp/wg_acc_det_a");
  fs::remove_all("/tmp/wg_acc_det_b");
  fs::create_directories("/tmp/wg_acc_det_a");
  fs::create_directories("/tmp/wg_acc_det_b");
  emit_all("/tmp/wg_acc_det_a");
  emit_all("/tmp/wg_acc_det_b");
  if (hash_dir("/tmp/wg_acc_det_a") != hash_dir("/tmp/wg_acc_det_b")) {
    detail = "artifact hashes differ between reruns";
    return false;
  }
  detail = "generation, edit, render, grid, navmesh artifacts byte-identical";
  return true;
}

}  // namespace

int main() {
  Criterion criteria[] = {
      {"1 metric oracle equivalence", 30, metric_oracles},
      {"2 icp recovery", 60, icp_recovery},
      {"3 navigability guarantee", 300, navigability},
      {"4 navmesh-cd self-consistency", 120, navmesh_cd_self},
      {"5 planted decomposition recovery", 180, planted_decomposition},
      {"6 connectivity-degree ordering", 120, degree_ordering},
      {"7 normalization invariants", 120, normalization_invariants},
      {"8 depth-render analytic check", 120, depth_analytic},
      {"9 benchmark regime", 600, benchmark_regime},
      {"10 determinism sweep", 120, determinism_sweep},
  };
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= c.limit_s;
    bool pass = ok && in_time;
    std::printf("criterion %s: %s (%.1fs%s)%s%s\n", c.name, pass ? "PASS" : "FAIL", secs,
                in_time ? "" : " OVER BUDGET", detail.empty() ? "" : " - ",
                detail.c_str());
    if (!pass) ++g_failures;
  }
  return g_failures == 0 ? 0 : 1;
}
