#include "ssc/scene/depth.hpp"

#include <cstring>
#include <stdexcept>

#include "ssc/errors.hpp"

namespace ssc::scene {

DepthImage::DepthImage(std::size_t width, std::size_t height)
    : DepthImage(width, height,
                 std::vector<float>(width * height, std::numeric_limits<float>::quiet_NaN())) {}

DepthImage::DepthImage(std::size_t width, std::size_t height, std::vector<float> depth)
    : width_(width), height_(height), depth_(std::move(depth)) {
  if (width_ == 0 || height_ == 0) throw ShapeError("depth image extents must be positive");
  if (depth_.size() != width_ * height_) throw ShapeError("depth payload does not match extents");
  for (float d : depth_) {
    if (!std::isnan(d) && !(d >= 0.0f)) throw std::invalid_argument("depth values must be >= 0");
  }
}

void DepthImage::set(std::size_t u, std::size_t v, float meters) {
  if (!(meters >= 0.0f)) throw std::invalid_argument("depth values must be >= 0");
  depth_[index(u, v)] = meters;
}

std::size_t DepthImage::valid_count() const {
  std::size_t n = 0;
  for (float d : depth_) n += std::isnan(d) ? 0 : 1;
  return n;
}

ad::Tensor DepthImage::to_input_tensor() const {
  std::vector<double> values(depth_.size() * 2);
  for (std::size_t i = 0; i < depth_.size(); ++i) {
    const bool ok = !std::isnan(depth_[i]);
    values[2 * i] = ok ? static_cast<double>(depth_[i]) : 0.0;
    values[2 * i + 1] = ok ? 1.0 : 0.0;
  }
  return ad::Tensor::from_values({width_, height_, 2}, std::move(values));
}

bool DepthImage::bitwise_equal(const DepthImage& other) const {
  return width_ == other.width_ && height_ == other.height_ &&
         std::memcmp(depth_.data(), other.depth_.data(), depth_.size() * sizeof(float)) == 0;
}

}  // namespace ssc::scene
