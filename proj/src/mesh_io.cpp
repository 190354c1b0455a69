#include "worldgen/mesh_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "worldgen/errors.hpp"

namespace worldgen {

namespace {

void format_double(char* buf, size_t n, double v) {
  // %.9g keeps files compact and reproducible; coordinates survive the
  // round trip well within 1e-6.
  std::snprintf(buf, n, "%.9g", v);
}

void write_obj(const TriMesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("export_mesh: cannot open " + path);
  char bx[40], by[40], bz[40];
  for (const auto& v : mesh.vertices) {
    format_double(bx, sizeof bx, v.x);
    format_double(by, sizeof by, v.y);
    format_double(bz, sizeof bz, v.z);
    f << "v " << bx << ' ' << by << ' ' << bz << '\n';
  }
  if (mesh.has_parts()) {
    // Group faces by part, preserving part order.
    for (int p = 0; p < (int)mesh.part_names.size(); ++p) {
      bool header = false;
      for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (mesh.tri_part[t] != p) continue;
        if (!header) {
          f << "o " << mesh.part_names[p] << '\n';
          header = true;
        }
        const auto& tri = mesh.triangles[t];
        f << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
      }
    }
  } else {
    for (const auto& tri : mesh.triangles)
      f << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
  }
  if (!f) throw IoError("export_mesh: write failed for " + path);
}

const char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64(const std::vector<uint8_t>& data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 2 < data.size(); i += 3) {
    uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(kB64[(v >> 6) & 63]);
    out.push_back(kB64[v & 63]);
  }
  if (i + 1 == data.size()) {
    uint32_t v = data[i] << 16;
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == data.size()) {
    uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(kB64[(v >> 6) & 63]);
    out += "=";
  }
  return out;
}

void write_gltf(const TriMesh& mesh, const std::string& path) {
  using nlohmann::json;
  // Split into per-part index ranges referencing a shared vertex buffer.
  int n_parts = mesh.has_parts() ? (int)mesh.part_names.size() : 1;

  std::vector<uint8_t> buffer;
  auto push_f32 = [&](float v) {
    uint8_t b[4];
    std::memcpy(b, &v, 4);
    buffer.insert(buffer.end(), b, b + 4);
  };
  auto push_u32 = [&](uint32_t v) {
    uint8_t b[4];
    std::memcpy(b, &v, 4);
    buffer.insert(buffer.end(), b, b + 4);
  };

  float pmin[3] = {1e30f, 1e30f, 1e30f}, pmax[3] = {-1e30f, -1e30f, -1e30f};
  for (const auto& v : mesh.vertices) {
    float c[3] = {(float)v.x, (float)v.y, (float)v.z};
    for (int k = 0; k < 3; ++k) {
      pmin[k] = std::min(pmin[k], c[k]);
      pmax[k] = std::max(pmax[k], c[k]);
      push_f32(c[k]);
    }
  }
  size_t pos_bytes = buffer.size();

  std::vector<std::pair<size_t, size_t>> index_ranges;  // byte offset, count
  for (int p = 0; p < n_parts; ++p) {
    size_t start = buffer.size();
    size_t count = 0;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      if (mesh.has_parts() && mesh.tri_part[t] != p) continue;
      for (int k = 0; k < 3; ++k) push_u32((uint32_t)mesh.triangles[t][k]);
      count += 3;
    }
    index_ranges.push_back({start, count});
  }

  json j;
  j["asset"] = {{"version", "2.0"}, {"generator", "worldgen"}};
  j["buffers"] = {{{"byteLength", buffer.size()},
                   {"uri", "data:application/octet-stream;base64," + base64(buffer)}}};
  j["bufferViews"] = json::array();
  j["bufferViews"].push_back({{"buffer", 0}, {"byteOffset", 0}, {"byteLength", pos_bytes},
                              {"target", 34962}});
  j["accessors"] = json::array();
  j["accessors"].push_back({{"bufferView", 0},
                            {"componentType", 5126},
                            {"count", mesh.vertices.size()},
                            {"type", "VEC3"},
                            {"min", {pmin[0], pmin[1], pmin[2]}},
                            {"max", {pmax[0], pmax[1], pmax[2]}}});
  j["meshes"] = json::array();
  j["nodes"] = json::array();
  std::vector<int> node_ids;
  for (int p = 0; p < n_parts; ++p) {
    auto [off, count] = index_ranges[p];
    if (count == 0) continue;
    int view = (int)j["bufferViews"].size();
    j["bufferViews"].push_back({{"buffer", 0}, {"byteOffset", off},
                                {"byteLength", count * 4}, {"target", 34963}});
    int acc = (int)j["accessors"].size();
    j["accessors"].push_back({{"bufferView", view},
                              {"componentType", 5125},
                              {"count", count},
                              {"type", "SCALAR"}});
    int mi = (int)j["meshes"].size();
    std::string name = mesh.has_parts() ? mesh.part_names[p] : "mesh";
    j["meshes"].push_back({{"name", name},
                           {"primitives", {{{"attributes", {{"POSITION", 0}}},
                                            {"indices", acc}, {"mode", 4}}}}});
    node_ids.push_back((int)j["nodes"].size());
    j["nodes"].push_back({{"name", name}, {"mesh", mi}});
  }
  j["scenes"] = {{{"nodes", node_ids}}};
  j["scene"] = 0;

  std::ofstream f(path);
  if (!f) throw IoError("export_mesh: cannot open " + path);
  f << j.dump();
  if (!f) throw IoError("export_mesh: write failed for " + path);
}

}  // namespace

void export_mesh(const TriMesh& mesh, MeshFormat format, const std::string& path) {
  if (format == MeshFormat::Obj)
    write_obj(mesh, path);
  else
    write_gltf(mesh, path);
}

TriMesh import_obj(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("import_obj: cannot open " + path);
  TriMesh m;
  std::string line;
  int current_part = -1;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v.x >> v.y >> v.z))
        throw SyntaxError("import_obj: bad vertex line: " + line);
      m.vertices.push_back(v);
    } else if (tag == "o" || tag == "g") {
      std::string name;
      ss >> name;
      m.part_names.push_back(name);
      current_part = (int)m.part_names.size() - 1;
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        // Accept `v`, `v/vt`, `v//vn`, `v/vt/vn`.
        size_t slash = tok.find('/');
        size_t end = slash == std::string::npos ? tok.size() : slash;
        int v = 0;
        std::from_chars(tok.data(), tok.data() + end, v);
        idx.push_back(v - 1);
      }
      for (size_t k = 2; k < idx.size(); ++k) {
        m.triangles.push_back({idx[0], idx[(int)k - 1], idx[(int)k]});
        if (current_part >= 0) m.tri_part.push_back(current_part);
      }
    }
  }
  for (const auto& tri : m.triangles)
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= (int)m.vertices.size())
        throw SyntaxError("import_obj: face index out of range");
  if (!m.part_names.empty() && m.tri_part.size() != m.triangles.size()) {
    // Faces before the first group get a default part.
    m.part_names.insert(m.part_names.begin(), "default");
    for (auto& p : m.tri_part) ++p;
    m.tri_part.insert(m.tri_part.begin(), m.triangles.size() - m.tri_part.size(), 0);
  }
  return m;
}

}  // namespace worldgen
