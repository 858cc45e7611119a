#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ssc/autodiff/tensor.hpp"

namespace ssc::scene {

// Per-pixel depth in meters along the camera z axis. Pixels with no return
// hold NaN; valid depths are >= 0. Storage is column-major with respect to
// the picture: index = u * height + v, where u is the horizontal pixel and
// v the vertical pixel (0 at the bottom). This keeps the image's first axis
// aligned with the volume's d axis.
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(std::size_t width, std::size_t height);
  DepthImage(std::size_t width, std::size_t height, std::vector<float> depth);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t pixel_count() const { return depth_.size(); }

  std::size_t index(std::size_t u, std::size_t v) const { return u * height_ + v; }
  float at(std::size_t u, std::size_t v) const { return depth_[index(u, v)]; }
  bool valid(std::size_t u, std::size_t v) const { return !std::isnan(at(u, v)); }
  void set(std::size_t u, std::size_t v, float meters);
  void set_invalid(std::size_t u, std::size_t v) {
    depth_[index(u, v)] = std::numeric_limits<float>::quiet_NaN();
  }

  std::span<const float> data() const { return depth_; }
  std::size_t valid_count() const;

  // Network input [width, height, 2]: channel 0 is depth (0 where invalid),
  // channel 1 is the validity mask.
  ad::Tensor to_input_tensor() const;

  bool bitwise_equal(const DepthImage& other) const;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<float> depth_;
};

}  // namespace ssc::scene
