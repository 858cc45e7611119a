#pragma once

#include <filesystem>
#include <string>

#include "ssc/scene/volume.hpp"

namespace ssc::eval {

// Wavefront OBJ text: every occupied voxel becomes a unit cube (8 vertices,
// 12 triangles) in a group named after its category. Empty voxels and
// unused categories produce nothing.
std::string geometry_obj(const scene::SemanticVolume& v);
void export_geometry(const scene::SemanticVolume& v, const std::filesystem::path& path);

}  // namespace ssc::eval
