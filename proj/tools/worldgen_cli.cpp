// Single-binary CLI wiring the generation pipeline and evaluation
// protocols. stdout carries one JSON summary line per run; human logs
// go to stderr. Exit codes: 0 ok, 1 validation error, 2 I/O error.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "worldgen/blockout.hpp"
#include "worldgen/decompose.hpp"
#include "worldgen/depth_render.hpp"
#include "worldgen/errors.hpp"
#include "worldgen/mesh_io.hpp"
#include "worldgen/metrics.hpp"
#include "worldgen/navmesh.hpp"
#include "worldgen/scene_spec.hpp"
#include "worldgen/synth_data.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace worldgen;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

// --config JSON merged under explicitly passed flags.
struct ConfigMerge {
  json values = json::object();

  void load(const std::string& path) {
    if (path.empty()) return;
    values = json::parse(slurp(path));
    if (!values.is_object()) throw SchemaError("config: top level must be an object");
  }
  template <class T>
  void fill(CLI::App* cmd, const std::string& flag, T& v) const {
    if (cmd->count("--" + flag) == 0 && values.contains(flag))
      v = values.at(flag).get<T>();
  }
};

void emit(const json& j) { std::cout << j.dump() << std::endl; }

SceneSpec load_spec_for_dir(const std::string& in_dir) {
  json man = json::parse(slurp((fs::path(in_dir) / "manifest.json").string()));
  return parse_scene_spec(man.at("spec").dump());
}

json effective(std::initializer_list<std::pair<std::string, json>> kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

void write_atomic(const fs::path& path, const std::string& text) {
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

int main(int argc, char** argv) {
  CLI::App app{"Procedural world blockout and navmesh toolkit"};
  app.require_subcommand(1);

  // Shared flag storage.
  std::string spec_path, in_path, out_dir, config_path, edits_path;
  std::string pred_path, gt_path;
  uint64_t seed = 0;
  bool seed_given = false;
  int resolution = 256, jobs = 1, n_scenes = 50, grid = 0;
  int objects_min = 10, objects_max = 30;
  double cell_size = -1.0, sigma = 0.0, azimuth = -1.0;
  AgentParams agent;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", out_dir, "Output directory")->required();
    c->add_option("--config", config_path, "JSON config merged under flags");
    c->add_flag_callback("--quiet", [] {}, "accepted for compatibility");
  };
  auto add_agent = [&](CLI::App* c) {
    c->add_option("--agent-radius", agent.radius);
    c->add_option("--agent-height", agent.height);
    c->add_option("--agent-climb", agent.max_climb);
    c->add_option("--agent-slope", agent.max_slope_deg);
  };

  CLI::App* c_gen = app.add_subcommand("generate", "Spec -> blockout + navmesh + depth");
  c_gen->add_option("--spec", spec_path, "Scene spec JSON")->required();
  c_gen->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  c_gen->add_option("--resolution", resolution, "Depth render resolution");
  add_common(c_gen);

  CLI::App* c_edit = app.add_subcommand("edit", "Apply an edit script to a generated scene");
  c_edit->add_option("--in", in_path, "Generated scene directory")->required();
  c_edit->add_option("--edits", edits_path, "Edit script JSON")->required();
  c_edit->add_option("--resolution", resolution);
  add_common(c_edit);

  CLI::App* c_nav = app.add_subcommand("navmesh", "Bake a navmesh from a mesh file");
  c_nav->add_option("--in", in_path, "OBJ mesh")->required();
  c_nav->add_option("--cell-size", cell_size, "Voxel size (default extent/256)");
  add_agent(c_nav);
  add_common(c_nav);

  CLI::App* c_depth = app.add_subcommand("render-depth", "Render a depth map of a scene");
  c_depth->add_option("--in", in_path, "Generated scene directory")->required();
  c_depth->add_option("--azimuth", azimuth, "Radians; default: auto-pick");
  c_depth->add_option("--resolution", resolution);
  c_depth->add_option("--sigma", sigma, "Relative depth noise std");
  c_depth->add_option("--seed", seed);
  add_common(c_depth);

  CLI::App* c_dec = app.add_subcommand("decompose", "Split a mesh into parts");
  c_dec->add_option("--in", in_path, "OBJ mesh")->required();
  add_common(c_dec);

  CLI::App* c_en = app.add_subcommand("eval-navmesh", "Navmesh Chamfer protocol");
  c_en->add_option("--pred", pred_path, "Predicted scene OBJ")->required();
  c_en->add_option("--gt", gt_path, "Ground-truth navmesh OBJ")->required();
  c_en->add_option("--cell-size", cell_size);
  add_agent(c_en);
  add_common(c_en);

  CLI::App* c_ep = app.add_subcommand("eval-parts", "Part-matching Chamfer/F-score");
  c_ep->add_option("--pred", pred_path, "Predicted scene OBJ")->required();
  c_ep->add_option("--gt", gt_path, "Ground-truth scene OBJ")->required();
  add_common(c_ep);

  CLI::App* c_syn = app.add_subcommand("synth", "Benchmark or grid dataset emission");
  c_syn->add_option("--template", spec_path, "Scene spec template JSON");
  c_syn->add_option("--scenes", n_scenes);
  c_syn->add_option("--objects-min", objects_min);
  c_syn->add_option("--objects-max", objects_max);
  c_syn->add_option("--grid", grid, "2 or 3: emit a grid scene instead of a benchmark");
  c_syn->add_option("--seed", seed);
  c_syn->add_option("--jobs", jobs);
  c_syn->add_option("--resolution", resolution);
  add_common(c_syn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    ConfigMerge cfgm;
    CLI::App* cmd = app.get_subcommands().front();
    cmd->count("--config") ? cfgm.load(config_path) : void();

    if (cmd == c_gen) {
      cfgm.fill(cmd, "resolution", resolution);
      SceneSpec spec = parse_scene_spec(slurp(spec_path));
      if (seed_given) spec.seed = seed;
      std::cerr << "generating scene seed=" << spec.seed << "\n";
      GeneratedScene g = generate_scene(spec);
      write_scene_dir(out_dir, g, resolution);
      emit({{"command", "generate"},
            {"out", out_dir},
            {"seed", spec.seed},
            {"object_count", (int)g.placements.placements.size()},
            {"navmesh_polygons", (int)g.navmesh.polygons.size()},
            {"effective", effective({{"resolution", resolution}})}});
    } else if (cmd == c_edit) {
      cfgm.fill(cmd, "resolution", resolution);
      SceneSpec spec = load_spec_for_dir(in_path);
      GeneratedScene g = generate_scene(spec);
      EditScript edits = parse_edit_script(slurp(edits_path));
      g.blockout = apply_edits(g.blockout, edits);
      g.navmesh = bake_navmesh(g.blockout.combined(), spec.agent, g.navmesh_cell_size);
      write_scene_dir(out_dir, g, resolution);
      emit({{"command", "edit"},
            {"out", out_dir},
            {"edits", (int)edits.size()},
            {"navmesh_polygons", (int)g.navmesh.polygons.size()}});
    } else if (cmd == c_nav) {
      cfgm.fill(cmd, "cell-size", cell_size);
      TriMesh mesh = import_obj(in_path);
      Vec3 e = mesh.bounds().extent();
      double cs = cell_size > 0.0 ? cell_size : std::max({e.x, e.y, e.z}) / 256.0;
      NavMesh nm = bake_navmesh(mesh, agent, cs);
      fs::create_directories(out_dir);
      export_navmesh_obj(nm, (fs::path(out_dir) / "navmesh.obj").string());
      export_navmesh_json(nm, (fs::path(out_dir) / "navmesh.json").string());
      auto comps = connectivity_components(nm);
      json creport = json::array();
      for (const auto& c : comps)
        creport.push_back({{"polygons", c.first}, {"area", c.second}});
      write_atomic(fs::path(out_dir) / "connectivity.json",
                   json{{"cell_size", cs}, {"components", creport}}.dump(2) + "\n");
      emit({{"command", "navmesh"},
            {"out", out_dir},
            {"polygons", (int)nm.polygons.size()},
            {"components", (int)comps.size()},
            {"area", nm.total_area()}});
    } else if (cmd == c_depth) {
      cfgm.fill(cmd, "resolution", resolution);
      cfgm.fill(cmd, "sigma", sigma);
      SceneSpec spec = load_spec_for_dir(in_path);
      GeneratedScene g = generate_scene(spec);
      double az = azimuth >= 0.0 ? azimuth : pick_azimuth(g.blockout, resolution);
      DepthCamera cam;
      DepthMap dm = render_depth(g.blockout, az, resolution, &cam);
      if (sigma > 0.0) dm = perturb_depth(dm, sigma, seed);
      fs::create_directories(out_dir);
      write_depth_png(dm, (fs::path(out_dir) / "depth.png").string(), &cam, sigma, seed, az);
      fs::rename(fs::path(out_dir) / "depth.png.json", fs::path(out_dir) / "depth.json");
      emit({{"command", "render-depth"},
            {"out", out_dir},
            {"azimuth", az},
            {"resolution", resolution},
            {"sigma", sigma}});
    } else if (cmd == c_dec) {
      TriMesh mesh = import_obj(in_path);
      PartSet ps = decompose_scene(mesh);
      FilterVerdict v = quality_filter(ps);
      fs::create_directories(out_dir);
      write_decompose_report(ps, DecomposeConfig{},
                             (fs::path(out_dir) / "report.json").string());
      TriMesh labeled;
      for (size_t i = 0; i < ps.parts.size(); ++i) {
        TriMesh w = ps.parts[i].world_mesh();
        w.part_names = {(int)i == ps.ground_index ? std::string("ground")
                                                  : "part_" + std::to_string(i)};
        w.tri_part.assign(w.triangles.size(), 0);
        labeled.append(w);
      }
      export_mesh(labeled, MeshFormat::Gltf, (fs::path(out_dir) / "parts.gltf").string());
      emit({{"command", "decompose"},
            {"out", out_dir},
            {"parts", (int)ps.parts.size()},
            {"ground_confidence", ps.ground_confidence},
            {"accepted", v.accept},
            {"reasons", v.reasons}});
    } else if (cmd == c_en) {
      TriMesh pred = import_obj(pred_path);
      TriMesh gt = import_obj(gt_path);
      NavmeshCdResult r = navmesh_cd_protocol(pred, gt, agent, 20000, cell_size);
      fs::create_directories(out_dir);
      r.report.write_csv((fs::path(out_dir) / "navmesh_cd.csv").string());
      r.report.write_json((fs::path(out_dir) / "navmesh_cd.json").string());
      emit({{"command", "eval-navmesh"},
            {"out", out_dir},
            {"chamfer", r.chamfer_distance},
            {"normalized_cell_size", r.normalized_cell_size}});
    } else if (cmd == c_ep) {
      PartSet pred = decompose_scene(import_obj(pred_path));
      PartSet gt = decompose_scene(import_obj(gt_path));
      EvalReport rep = part_match_eval(pred, gt);
      fs::create_directories(out_dir);
      rep.write_csv((fs::path(out_dir) / "parts.csv").string());
      rep.write_json((fs::path(out_dir) / "parts.json").string());
      emit({{"command", "eval-parts"},
            {"out", out_dir},
            {"rows", (int)rep.rows.size()},
            {"aggregates", rep.aggregates}});
    } else if (cmd == c_syn) {
      cfgm.fill(cmd, "scenes", n_scenes);
      cfgm.fill(cmd, "jobs", jobs);
      if (grid != 0) {
        GridSceneSpec gs;
        gs.grid = grid;
        gs.seed = seed;
        TriMesh cube;
        cube.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                         {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
        cube.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                          {0, 1, 5}, {0, 5, 4}, {1, 2, 6}, {1, 6, 5},
                          {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
        gs.assets.assign(grid * grid, cube);
        TriMesh scene;
        PartSet parts;
        compose_grid_scene(gs, scene, parts);
        fs::create_directories(out_dir);
        export_mesh(scene, MeshFormat::Obj, (fs::path(out_dir) / "scene.obj").string());
        export_mesh(scene, MeshFormat::Gltf, (fs::path(out_dir) / "parts.gltf").string());
        write_atomic(fs::path(out_dir) / "manifest.json",
                     json{{"grid", grid}, {"seed", seed},
                          {"parts", (int)parts.parts.size()}}
                             .dump(2) +
                         "\n");
        emit({{"command", "synth"},
              {"mode", "grid"},
              {"out", out_dir},
              {"parts", (int)parts.parts.size()}});
      } else {
        SceneSpec tmpl;
        if (!spec_path.empty()) tmpl = parse_scene_spec(slurp(spec_path));
        BenchmarkConfig bc;
        bc.n_scenes = n_scenes;
        bc.objects_min = objects_min;
        bc.objects_max = objects_max;
        bc.depth_resolution = resolution;
        bc.jobs = jobs;
        build_benchmark(out_dir, tmpl, seed, bc);
        emit({{"command", "synth"},
              {"mode", "benchmark"},
              {"out", out_dir},
              {"scenes", n_scenes}});
      }
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
