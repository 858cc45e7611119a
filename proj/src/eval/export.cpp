#include "ssc/eval/export.hpp"

#include <fstream>

#include "ssc/errors.hpp"

namespace ssc::eval {
namespace {

// Corner i has offsets (i & 1, (i >> 1) & 1, (i >> 2) & 1) along (d, h, w).
constexpr int kCubeTriangles[12][3] = {
    {0, 2, 1}, {1, 2, 3},  // w = 0
    {4, 5, 6}, {5, 7, 6},  // w = 1
    {0, 1, 4}, {1, 5, 4},  // h = 0
    {2, 6, 3}, {3, 6, 7},  // h = 1
    {0, 4, 2}, {2, 4, 6},  // d = 0
    {1, 3, 5}, {3, 7, 5},  // d = 1
};

}  // namespace

std::string geometry_obj(const scene::SemanticVolume& v) {
  const scene::Extents3 e = v.extents();
  const auto labels = v.labels();
  std::string out = "# semantic voxel export " + scene::to_string(e) + "\n";
  std::size_t next_vertex = 1;
  for (std::size_t c = 1; c < v.num_categories(); ++c) {
    bool group_open = false;
    for (std::size_t d = 0; d < e.d; ++d) {
      for (std::size_t h = 0; h < e.h; ++h) {
        for (std::size_t w = 0; w < e.w; ++w) {
          if (labels[v.index(d, h, w)] != c) continue;
          if (!group_open) {
            out += "g " + v.category_names()[c] + "\n";
            group_open = true;
          }
          for (int i = 0; i < 8; ++i) {
            out += "v " + std::to_string(d + (i & 1)) + " " + std::to_string(h + ((i >> 1) & 1)) + " " +
                   std::to_string(w + ((i >> 2) & 1)) + "\n";
          }
          for (const auto& tri : kCubeTriangles) {
            out += "f " + std::to_string(next_vertex + tri[0]) + " " + std::to_string(next_vertex + tri[1]) +
                   " " + std::to_string(next_vertex + tri[2]) + "\n";
          }
          next_vertex += 8;
        }
      }
    }
  }
  return out;
}

void export_geometry(const scene::SemanticVolume& v, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << geometry_obj(v);
  if (!out) throw FormatError(FormatError::Kind::kIo, "cannot write " + path.string());
}

}  // namespace ssc::eval
