#include "worldgen/synth_data.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "worldgen/depth_render.hpp"
#include "worldgen/errors.hpp"
#include "worldgen/mesh_io.hpp"
#include "worldgen/rng.hpp"
#include "worldgen/terrain.hpp"

namespace fs = std::filesystem;

namespace worldgen {

void compose_grid_scene(const GridSceneSpec& gs, TriMesh& scene, PartSet& gt_parts) {
  if (gs.grid != 2 && gs.grid != 3)
    throw BadParamsError("compose_grid_scene: grid must be 2 or 3");
  if (gs.spacing < 0.0) throw BadParamsError("compose_grid_scene: negative spacing");
  int cells = gs.grid * gs.grid;
  if (gs.assets.empty() ||
      (!gs.sample_with_replacement && (int)gs.assets.size() < cells))
    throw InsufficientAssetsError("compose_grid_scene: need " + std::to_string(cells) +
                                  " assets, have " + std::to_string(gs.assets.size()));

  Rng rng(hash_combine(gs.seed, 0x6712d5ull));
  double pitch = 1.0 + gs.spacing;
  double half_span = gs.grid * pitch * 0.5 + 1.0;

  scene = TriMesh{};
  gt_parts = PartSet{};

  TriMesh ground;
  ground.vertices = {{-half_span, -half_span, 0.0},
                     {half_span, -half_span, 0.0},
                     {half_span, half_span, 0.0},
                     {-half_span, half_span, 0.0}};
  ground.triangles = {{0, 1, 2}, {0, 2, 3}};
  ground.part_names = {"ground"};
  ground.tri_part = {0, 0};
  scene.append(ground);
  gt_parts.parts.push_back(part_from_world_mesh(ground, PartLabel::Ground));
  gt_parts.ground_index = 0;

  for (int cell = 0; cell < cells; ++cell) {
    int idx = gs.sample_with_replacement
                  ? (int)rng.uniform_int(0, (int64_t)gs.assets.size() - 1)
                  : cell;
    TriMesh inst = gs.assets[idx];
    if (inst.vertices.empty() || inst.triangles.empty())
      throw EmptyMeshError("compose_grid_scene: empty asset");

    // Unit-box normalization: longest axis -> 1, centered in xy,
    // resting at z = 0.
    Aabb3 bb = inst.bounds();
    Vec3 ext = bb.extent();
    double m = std::max({ext.x, ext.y, ext.z});
    if (m <= 0.0) throw DegenerateBoundsError("compose_grid_scene: flat asset");
    double s = 1.0 / m;
    Vec3 c = (bb.min + bb.max) * 0.5;
    int i = cell % gs.grid, j = cell / gs.grid;
    Vec2 at{(i - (gs.grid - 1) * 0.5) * pitch, (j - (gs.grid - 1) * 0.5) * pitch};
    for (auto& v : inst.vertices) {
      v = (v - c) * s;
      v.z -= (bb.min.z - c.z) * s;  // base to z = 0
      v.x += at.x;
      v.y += at.y;
    }
    inst.part_names = {"object_" + std::to_string(cell)};
    inst.tri_part.assign(inst.triangles.size(), 0);
    scene.append(inst);
    gt_parts.parts.push_back(part_from_world_mesh(inst, PartLabel::Object));
  }

  double total_proj = 0.0, ground_proj = 0.0;
  for (size_t p = 0; p < gt_parts.parts.size(); ++p) {
    const TriMesh& m2 = gt_parts.parts[p].mesh;
    double proj = 0.0;
    for (int t = 0; t < (int)m2.triangles.size(); ++t)
      proj += 0.5 * std::abs(m2.triangle_normal(t).z);
    total_proj += proj;
    if (p == 0) ground_proj = proj;
  }
  gt_parts.ground_confidence = total_proj > 0.0 ? ground_proj / total_proj : 0.0;
}

namespace {

Vec3 surface_point(const TriMesh& m, const std::vector<double>& cum, Rng& rng,
                   Vec3* normal) {
  double u = rng.uniform01() * cum.back();
  size_t t = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
  if (t >= m.triangles.size()) t = m.triangles.size() - 1;
  const auto& tri = m.triangles[t];
  double r1 = std::sqrt(rng.uniform01()), r2 = rng.uniform01();
  double b0 = 1.0 - r1, b1 = r1 * (1.0 - r2), b2 = r1 * r2;
  if (normal) {
    Vec3 n = m.triangle_normal((int)t);
    double len = n.norm();
    *normal = len > 0.0 ? n / len : Vec3{0, 0, 1};
  }
  return m.vertices[tri[0]] * b0 + m.vertices[tri[1]] * b1 + m.vertices[tri[2]] * b2;
}

}  // namespace

TriMesh degrade_mesh(const TriMesh& m, uint64_t seed, const DegradeParams& params) {
  if (m.vertices.empty() || m.triangles.empty())
    throw EmptyMeshError("degrade_mesh: empty mesh");

  Rng rng(hash_combine(seed, 0xde62adeull));
  bool do_mask = rng.uniform01() < params.mask_prob;
  bool do_break = rng.uniform01() < params.break_prob;
  bool do_float = rng.uniform01() < params.floater_prob;

  TriMesh out = m;
  double diag = m.bounds().extent().norm();

  std::vector<double> cum(m.triangles.size());
  double acc = 0.0;
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    acc += m.triangle_area((int)t);
    cum[t] = acc;
  }

  if (do_break && params.break_patches > 0) {
    double r = params.break_radius * diag, amp = params.break_amp * diag;
    for (int p = 0; p < params.break_patches; ++p) {
      Vec3 c = surface_point(m, cum, rng, nullptr);
      for (auto& v : out.vertices)
        if ((v - c).norm() <= r)
          v = v + Vec3{rng.uniform(-amp, amp), rng.uniform(-amp, amp),
                       rng.uniform(-amp, amp)};
    }
  }

  if (do_mask && params.mask_spheres > 0) {
    double r = params.mask_radius * diag;
    std::vector<Vec3> centers;
    for (int s = 0; s < params.mask_spheres; ++s)
      centers.push_back(surface_point(m, cum, rng, nullptr));
    size_t budget = (size_t)std::floor(params.max_removal * (double)out.triangles.size());
    std::vector<char> drop(out.triangles.size(), 0);
    size_t dropped = 0;
    for (size_t t = 0; t < out.triangles.size() && dropped < budget; ++t) {
      const auto& tri = out.triangles[t];
      Vec3 tc = (out.vertices[tri[0]] + out.vertices[tri[1]] + out.vertices[tri[2]]) / 3.0;
      for (const auto& c : centers)
        if ((tc - c).norm() <= r) {
          drop[t] = 1;
          ++dropped;
          break;
        }
    }
    TriMesh kept;
    kept.vertices = out.vertices;
    kept.part_names = out.part_names;
    for (size_t t = 0; t < out.triangles.size(); ++t) {
      if (drop[t]) continue;
      kept.triangles.push_back(out.triangles[t]);
      if (!out.tri_part.empty()) kept.tri_part.push_back(out.tri_part[t]);
    }
    out = std::move(kept);
  }

  if (do_float && params.floater_count > 0) {
    double r = params.floater_size * diag, off = params.floater_offset * diag;
    int blob_part = -1;
    if (out.has_parts()) {
      blob_part = (int)out.part_names.size();
      out.part_names.push_back("floaters");
    }
    for (int k = 0; k < params.floater_count; ++k) {
      Vec3 n{};
      Vec3 c = surface_point(m, cum, rng, &n) + n * off;
      int base = (int)out.vertices.size();
      // Octahedron: one detached component per floater.
      out.vertices.push_back(c + Vec3{r, 0, 0});
      out.vertices.push_back(c + Vec3{-r, 0, 0});
      out.vertices.push_back(c + Vec3{0, r, 0});
      out.vertices.push_back(c + Vec3{0, -r, 0});
      out.vertices.push_back(c + Vec3{0, 0, r});
      out.vertices.push_back(c + Vec3{0, 0, -r});
      int f[8][3] = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                     {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
      for (auto& face : f) {
        out.triangles.push_back({base + face[0], base + face[1], base + face[2]});
        if (blob_part >= 0) out.tri_part.push_back(blob_part);
      }
    }
  }

  return out;
}

GeneratedScene generate_scene(const SceneSpec& spec) {
  GeneratedScene g;
  g.spec = spec;

  HeightField hf = generate_heightfield(spec, hash_combine(spec.seed, 1));
  RegionSet rs = make_partition(spec.extent, spec.partition.strategy, spec.partition.params,
                                spec.partition.region_count_hint, hash_combine(spec.seed, 2));
  rs = assign_roles(rs, spec, hash_combine(spec.seed, 3));
  g.regions = rs;

  PlacementSet ps = empty_placement_set(spec.extent);
  ps = place_tier(rs, hf, Tier::Hero, spec, ps, hash_combine(spec.seed, 4));
  ps = place_tier(rs, hf, Tier::Medium, spec, ps, hash_combine(spec.seed, 5));
  ps = place_tier(rs, hf, Tier::Small, spec, ps, hash_combine(spec.seed, 6));
  ps = enforce_navigability(ps, rs, spec.agent);
  g.placements = ps;

  std::vector<Rect> pads;
  pads.reserve(ps.placements.size());
  for (const auto& p : ps.placements) pads.push_back(p.world_aabb());
  HeightField smoothed = smooth_under_footprints(hf, pads);

  g.blockout = assemble_blockout(smoothed, ps);
  g.navmesh_cell_size = spec.extent / 256.0;
  g.navmesh = bake_navmesh(g.blockout.combined(), spec.agent, g.navmesh_cell_size);
  return g;
}

namespace {

void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw IoError("cannot open " + tmp.string());
    f << text;
  }
  fs::rename(tmp, path);
}

}  // namespace

void write_scene_dir(const std::string& dir_str, const GeneratedScene& g,
                     int depth_resolution) {
  fs::path dir(dir_str);
  fs::create_directories(dir);
  TriMesh combined = g.blockout.combined();
  export_mesh(combined, MeshFormat::Obj, (dir / "scene.obj").string());
  export_mesh(combined, MeshFormat::Gltf, (dir / "parts.gltf").string());
  export_navmesh_obj(g.navmesh, (dir / "navmesh.obj").string());
  export_navmesh_json(g.navmesh, (dir / "navmesh.json").string());

  double azimuth = pick_azimuth(g.blockout, depth_resolution);
  DepthCamera cam;
  DepthMap dm = render_depth(g.blockout, azimuth, depth_resolution, &cam);
  write_depth_png(dm, (dir / "depth.png").string(), &cam, 0.0, 0, azimuth);
  fs::rename(dir / "depth.png.json", dir / "depth.json");

  nlohmann::json man;
  man["seed"] = g.spec.seed;
  man["spec"] = nlohmann::json::parse(serialize_scene_spec(g.spec));
  man["object_count"] = (int)g.placements.placements.size();
  man["azimuth"] = azimuth;
  man["navmesh"] = {{"polygons", (int)g.navmesh.polygons.size()},
                    {"area", g.navmesh.total_area()},
                    {"cell_size", g.navmesh_cell_size}};
  man["files"] = {"scene.obj", "parts.gltf", "navmesh.obj", "navmesh.json",
                  "depth.png",  "depth.json"};
  write_file_atomic(dir / "manifest.json", man.dump(2) + "\n");
}

void build_benchmark(const std::string& out_dir, const SceneSpec& spec_template,
                     uint64_t seed, const BenchmarkConfig& cfg) {
  if (cfg.n_scenes < 1) throw BadParamsError("build_benchmark: n_scenes must be >= 1");
  if (cfg.objects_min < 1 || cfg.objects_max < cfg.objects_min)
    throw BadParamsError("build_benchmark: bad objects range");
  fs::path root(out_dir);
  fs::create_directories(root);

  std::vector<nlohmann::json> entries(cfg.n_scenes);
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_err;

  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= cfg.n_scenes) return;
      try {
        uint64_t scene_seed = hash_combine(seed, (uint64_t)i + 1);
        Rng rng(hash_combine(scene_seed, 0xc07771ull));
        int target = (int)rng.uniform_int(cfg.objects_min, cfg.objects_max);

        // Placement is rejection-sampled and may fall short of the
        // target; retry with fresh sub-seeds until the placed count
        // lands in range, keeping the best attempt as a fallback.
        GeneratedScene best;
        int best_count = -1;
        for (int attempt = 0; attempt < 8; ++attempt) {
          SceneSpec s = spec_template;
          s.seed = hash_combine(scene_seed, (uint64_t)attempt);
          s.density.tier = DensityTier::High;
          s.density.hero_count = std::max(1, target / 10);
          s.density.medium_count = std::max(1, (3 * target) / 10);
          s.density.small_count =
              std::max(0, target - s.density.hero_count - s.density.medium_count);
          GeneratedScene g = generate_scene(s);
          int got = (int)g.placements.placements.size();
          if (got > best_count) {
            best_count = got;
            best = std::move(g);
          }
          if (best_count >= cfg.objects_min && best_count <= cfg.objects_max) break;
        }

        char name[32];
        std::snprintf(name, sizeof name, "scene_%03d", i);
        write_scene_dir((root / name).string(), best, cfg.depth_resolution);
        entries[i] = {{"dir", name}, {"seed", scene_seed}, {"object_count", best_count}};
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_err) first_err = std::current_exception();
        return;
      }
    }
  };

  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_err) std::rethrow_exception(first_err);

  nlohmann::json man;
  man["n_scenes"] = cfg.n_scenes;
  man["seed"] = seed;
  man["objects_range"] = {cfg.objects_min, cfg.objects_max};
  man["template"] = nlohmann::json::parse(serialize_scene_spec(spec_template));
  man["scenes"] = entries;
  write_file_atomic(root / "manifest.json", man.dump(2) + "\n");
}

}  // namespace worldgen
