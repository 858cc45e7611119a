#include "ssc/scene/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "ssc/errors.hpp"

namespace ssc::scene {

CameraModel CameraModel::pinhole(const Extents3& volume, std::size_t image_width,
                                 std::size_t image_height, double vertical_fov_deg,
                                 double voxel_size, double origin_w) {
  CameraModel cam;
  cam.image_width = image_width;
  cam.image_height = image_height;
  const double half = vertical_fov_deg * std::numbers::pi / 360.0;
  cam.fy = 0.5 * static_cast<double>(image_height) / std::tan(half);
  cam.fx = cam.fy;
  cam.cx = 0.5 * static_cast<double>(image_width);
  cam.cy = 0.5 * static_cast<double>(image_height);
  cam.origin = {0.5 * static_cast<double>(volume.d), 0.5 * static_cast<double>(volume.h), origin_w};
  cam.voxel_size = voxel_size;
  return cam;
}

CameraModel CameraModel::orthographic_view(const Extents3& volume, std::size_t image_width,
                                           std::size_t image_height, double voxel_size,
                                           double origin_w) {
  CameraModel cam;
  cam.image_width = image_width;
  cam.image_height = image_height;
  cam.orthographic = true;
  // Pixels per voxel along each axis.
  cam.fx = static_cast<double>(image_width) / static_cast<double>(volume.d);
  cam.fy = static_cast<double>(image_height) / static_cast<double>(volume.h);
  cam.cx = 0.5 * static_cast<double>(image_width);
  cam.cy = 0.5 * static_cast<double>(image_height);
  cam.origin = {0.5 * static_cast<double>(volume.d), 0.5 * static_cast<double>(volume.h), origin_w};
  cam.voxel_size = voxel_size;
  return cam;
}

namespace {

// Parameter along a ray with unit z-component at which it first hits a
// non-empty voxel, or nullopt if it exits the volume. Amanatides-Woo traversal.
std::optional<double> march(const SemanticVolume& vol, std::array<double, 3> origin,
                            std::array<double, 3> dir) {
  const Extents3& e = vol.extents();
  const std::array<double, 3> hi{static_cast<double>(e.d), static_cast<double>(e.h),
                                 static_cast<double>(e.w)};
  // Clip against the volume box.
  double t_enter = 0.0;
  double t_exit = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < 0.0 || origin[a] >= hi[a]) return std::nullopt;
      continue;
    }
    double t0 = (0.0 - origin[a]) / dir[a];
    double t1 = (hi[a] - origin[a]) / dir[a];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter >= t_exit) return std::nullopt;

  std::array<std::int64_t, 3> cell{};
  std::array<std::int64_t, 3> step{};
  std::array<double, 3> t_max{};
  std::array<double, 3> t_delta{};
  for (int a = 0; a < 3; ++a) {
    const double p = origin[a] + t_enter * dir[a];
    auto c = static_cast<std::int64_t>(std::floor(p));
    // Entering through the upper face of the box while moving backwards.
    if (dir[a] < 0.0 && p == std::floor(p)) c -= 1;
    cell[a] = std::clamp<std::int64_t>(c, 0, static_cast<std::int64_t>(hi[a]) - 1);
    if (dir[a] > 0.0) {
      step[a] = 1;
      t_max[a] = (static_cast<double>(cell[a] + 1) - origin[a]) / dir[a];
      t_delta[a] = 1.0 / dir[a];
    } else if (dir[a] < 0.0) {
      step[a] = -1;
      t_max[a] = (static_cast<double>(cell[a]) - origin[a]) / dir[a];
      t_delta[a] = -1.0 / dir[a];
    } else {
      step[a] = 0;
      t_max[a] = std::numeric_limits<double>::infinity();
      t_delta[a] = std::numeric_limits<double>::infinity();
    }
  }

  double t = t_enter;
  while (true) {
    if (vol.at(static_cast<std::size_t>(cell[0]), static_cast<std::size_t>(cell[1]),
               static_cast<std::size_t>(cell[2])) != kEmpty) {
      return t;
    }
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    t = t_max[axis];
    cell[axis] += step[axis];
    if (cell[axis] < 0 || cell[axis] >= static_cast<std::int64_t>(hi[axis])) return std::nullopt;
    t_max[axis] += t_delta[axis];
  }
}

}  // namespace

DepthImage render_depth(const SemanticVolume& volume, const CameraModel& cam) {
  if (cam.image_width == 0 || cam.image_height == 0) throw ShapeError("camera image is empty");
  if (!(cam.fx > 0.0 && cam.fy > 0.0)) throw std::invalid_argument("camera focal lengths must be positive");
  DepthImage image(cam.image_width, cam.image_height);
  for (std::size_t u = 0; u < cam.image_width; ++u) {
    for (std::size_t v = 0; v < cam.image_height; ++v) {
      const double px = (static_cast<double>(u) + 0.5 - cam.cx) / cam.fx;
      const double py = (static_cast<double>(v) + 0.5 - cam.cy) / cam.fy;
      std::optional<double> t;
      if (cam.orthographic) {
        t = march(volume, {cam.origin[0] + px, cam.origin[1] + py, cam.origin[2]}, {0.0, 0.0, 1.0});
      } else {
        t = march(volume, cam.origin, {px, py, 1.0});
      }
      // With a unit z-component the ray parameter is the z distance.
      if (t) image.set(u, v, static_cast<float>(*t * cam.voxel_size));
    }
  }
  return image;
}

}  // namespace ssc::scene
