#pragma once

#include <array>
#include <cstddef>

#include "ssc/scene/depth.hpp"
#include "ssc/scene/volume.hpp"

namespace ssc::scene {

// Camera looking along +w. Positions are in voxel units; the pose is fixed,
// only the origin can move. Image u maps to the volume d axis and image v
// to the h axis.
struct CameraModel {
  std::size_t image_width = 0;
  std::size_t image_height = 0;
  double fx = 0.0;  // focal lengths in pixels (pinhole)
  double fy = 0.0;
  double cx = 0.0;  // principal point in pixels
  double cy = 0.0;
  bool orthographic = false;
  std::array<double, 3> origin{};  // (d, h, w) in voxel units
  double voxel_size = 0.02;       // meters per voxel

  // Pinhole with the given vertical field of view, centered principal point,
  // origin at the center of the w = origin_w plane.
  static CameraModel pinhole(const Extents3& volume, std::size_t image_width,
                             std::size_t image_height, double vertical_fov_deg = 60.0,
                             double voxel_size = 0.02, double origin_w = 0.0);
  // Parallel rays; the image spans the d x h face.
  static CameraModel orthographic_view(const Extents3& volume, std::size_t image_width,
                                       std::size_t image_height, double voxel_size = 0.02,
                                       double origin_w = 0.0);
};

// Marches one ray per pixel to the first non-empty voxel. Depth is the
// distance along the camera z axis; rays that leave the volume are invalid.
DepthImage render_depth(const SemanticVolume& volume, const CameraModel& camera);

}  // namespace ssc::scene
