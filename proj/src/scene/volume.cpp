#include "ssc/scene/volume.hpp"

#include <stdexcept>

#include "ssc/errors.hpp"

namespace ssc::scene {

const std::vector<std::string>& default_category_names() {
  static const std::vector<std::string> names{
      "empty", "ceiling", "floor", "wall",  "window",    "door",
      "chair", "bed",     "sofa",  "table", "furniture", "objects"};
  return names;
}

std::vector<std::string> category_names_for(std::size_t n) {
  if (n == kDefaultCategoryCount) return default_category_names();
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(i == 0 ? "empty" : "c" + std::to_string(i));
  return names;
}

std::string to_string(const Extents3& e) {
  return std::to_string(e.d) + "x" + std::to_string(e.h) + "x" + std::to_string(e.w);
}

SemanticVolume::SemanticVolume(Extents3 extents, std::size_t num_categories)
    : SemanticVolume(extents, std::vector<std::uint8_t>(extents.count(), kEmpty),
                     category_names_for(num_categories)) {}

SemanticVolume::SemanticVolume(Extents3 extents, std::vector<std::uint8_t> labels,
                               std::size_t num_categories)
    : SemanticVolume(extents, std::move(labels), category_names_for(num_categories)) {}

SemanticVolume::SemanticVolume(Extents3 extents, std::vector<std::uint8_t> labels,
                               std::vector<std::string> category_names)
    : extents_(extents), labels_(std::move(labels)), names_(std::move(category_names)) {
  if (extents_.count() == 0) throw ShapeError("volume extents must be positive");
  if (labels_.size() != extents_.count()) {
    throw ShapeError("label count " + std::to_string(labels_.size()) + " does not match extents " +
                     to_string(extents_));
  }
  if (names_.empty() || names_.size() > 256) throw ShapeError("category count must be in [1, 256]");
  for (std::uint8_t l : labels_) {
    if (l >= names_.size()) {
      throw ShapeError("label " + std::to_string(l) + " outside [0, " +
                       std::to_string(names_.size()) + ")");
    }
  }
}

void SemanticVolume::set(std::size_t d, std::size_t h, std::size_t w, std::uint8_t label) {
  if (label >= names_.size()) throw std::out_of_range("label outside category table");
  labels_[index(d, h, w)] = label;
}

std::vector<std::size_t> SemanticVolume::category_counts() const {
  std::vector<std::size_t> counts(names_.size(), 0);
  for (std::uint8_t l : labels_) ++counts[l];
  return counts;
}

ad::Tensor SemanticVolume::one_hot() const {
  const std::size_t nc = names_.size();
  std::vector<double> values(labels_.size() * nc, 0.0);
  for (std::size_t i = 0; i < labels_.size(); ++i) values[i * nc + labels_[i]] = 1.0;
  return ad::Tensor::from_values({extents_.d, extents_.h, extents_.w, nc}, std::move(values));
}

}  // namespace ssc::scene
