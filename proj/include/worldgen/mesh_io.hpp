#pragma once

#include <string>

#include "worldgen/geometry.hpp"

namespace worldgen {

enum class MeshFormat { Obj, Gltf };

// OBJ: ASCII, 1-based indices, one `o <part>` group per label when the
// mesh carries parts. glTF 2.0: single embedded buffer, positions and
// indices, one node/mesh per part.
void export_mesh(const TriMesh& mesh, MeshFormat format, const std::string& path);

TriMesh import_obj(const std::string& path);

}  // namespace worldgen
