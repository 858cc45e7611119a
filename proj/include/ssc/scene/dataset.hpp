#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ssc/scene/generator.hpp"
#include "ssc/scene/vsem.hpp"

namespace ssc::scene {

struct Dataset {
  std::vector<Sample> samples;
  // Free-form provenance (seed, generator settings), persisted in manifest.txt.
  std::map<std::string, std::string> provenance;

  std::size_t size() const { return samples.size(); }
  // Throws ShapeError unless all volumes share extents and category count
  // and all depth images share extents.
  void validate() const;
};

// Synthetic paired data. Each scene is generated at `scale` times the
// target volume extents, rendered at `render_scale` times the target depth
// extents from just inside the front wall, then reduced with
// downsample_volume and resize_depth.
struct SyntheticConfig {
  std::size_t count = 8;
  std::uint64_t seed = 1;
  Extents3 volume_extents{20, 12, 20};
  std::size_t depth_width = 80;
  std::size_t depth_height = 60;
  std::size_t scale = 3;
  std::size_t render_scale = 2;
  double room_width_m = 4.8;
  double vertical_fov_deg = 60.0;
  SceneConfig scene;  // extents are overridden by volume_extents * scale
};

Sample make_synthetic_sample(std::uint64_t seed, const SyntheticConfig& config);
Dataset make_synthetic_dataset(const SyntheticConfig& config);

// Directory layout: manifest.txt plus sample_NNNNN.{depth,volume}.vsem.
void save_dataset(const std::filesystem::path& dir, const Dataset& dataset);
Dataset load_dataset(const std::filesystem::path& dir,
                     std::size_t num_categories = kDefaultCategoryCount);

}  // namespace ssc::scene
