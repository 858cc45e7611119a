#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ssc/scene/depth.hpp"
#include "ssc/scene/volume.hpp"

namespace ssc::scene {

// Bilinear resampling with half-pixel centers. Interpolation weights are
// renormalized over valid supports; a target pixel whose four supports are
// all invalid stays invalid. Target extents must not exceed the source.
DepthImage resize_depth(const DepthImage& image, std::size_t target_width, std::size_t target_height);

// k x k x k block reduction. A block becomes empty only if all its voxels
// are empty; otherwise the most frequent non-empty category wins, ties going
// to the lower index. Extents that are not multiples of k are padded with
// empty voxels.
SemanticVolume downsample_volume(const SemanticVolume& volume, std::size_t k = 3);

// Pointwise relabeling. `mapping` must cover every source category; the
// result uses `target_names` as its category table.
SemanticVolume remap_labels(const SemanticVolume& volume, const std::map<std::size_t, std::size_t>& mapping,
                            const std::vector<std::string>& target_names);

}  // namespace ssc::scene
