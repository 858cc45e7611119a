#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssc/autodiff/tensor.hpp"

namespace ssc::scene {

// Category indices of the default 12-class table. Index 0 is always empty space.
enum Category : std::uint8_t {
  kEmpty = 0,
  kCeiling,
  kFloor,
  kWall,
  kWindow,
  kDoor,
  kChair,
  kBed,
  kSofa,
  kTable,
  kFurniture,
  kSmallObjects,
};

inline constexpr std::size_t kDefaultCategoryCount = 12;
const std::vector<std::string>& default_category_names();

// Volume extents. `d` runs along the image horizontal, `h` is vertical with
// 0 at the floor, `w` points away from the camera.
struct Extents3 {
  std::size_t d = 0;
  std::size_t h = 0;
  std::size_t w = 0;

  std::size_t count() const { return d * h * w; }
  friend bool operator==(const Extents3&, const Extents3&) = default;
};

std::string to_string(const Extents3& e);

// One category label per voxel, stored row-major over (d, h, w).
class SemanticVolume {
 public:
  SemanticVolume() = default;
  explicit SemanticVolume(Extents3 extents, std::size_t num_categories = kDefaultCategoryCount);
  SemanticVolume(Extents3 extents, std::vector<std::uint8_t> labels,
                 std::size_t num_categories = kDefaultCategoryCount);
  SemanticVolume(Extents3 extents, std::vector<std::uint8_t> labels,
                 std::vector<std::string> category_names);

  const Extents3& extents() const { return extents_; }
  std::size_t num_categories() const { return names_.size(); }
  const std::vector<std::string>& category_names() const { return names_; }

  std::size_t index(std::size_t d, std::size_t h, std::size_t w) const {
    return (d * extents_.h + h) * extents_.w + w;
  }
  std::uint8_t at(std::size_t d, std::size_t h, std::size_t w) const { return labels_[index(d, h, w)]; }
  void set(std::size_t d, std::size_t h, std::size_t w, std::uint8_t label);

  std::span<const std::uint8_t> labels() const { return labels_; }
  std::vector<std::size_t> category_counts() const;

  // [D, H, W, N_c] with exactly one 1 per voxel.
  ad::Tensor one_hot() const;

  friend bool operator==(const SemanticVolume&, const SemanticVolume&) = default;

 private:
  Extents3 extents_{};
  std::vector<std::uint8_t> labels_;
  std::vector<std::string> names_;
};

// Names for `n` categories: the default table when n == 12, "c<i>" otherwise.
std::vector<std::string> category_names_for(std::size_t n);

}  // namespace ssc::scene
