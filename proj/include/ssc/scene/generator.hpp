#pragma once

#include <cstddef>
#include <cstdint>

#include "ssc/scene/volume.hpp"

namespace ssc::scene {

// Procedural indoor room: floor and ceiling slabs, four walls with door and
// window apertures, axis-aligned furniture boxes on the floor and small
// objects resting on tables and furniture.
struct SceneConfig {
  Extents3 extents{60, 36, 60};
  std::size_t wall_thickness = 1;
  std::size_t doors = 1;
  std::size_t windows = 1;
  std::size_t beds = 1;
  std::size_t sofas = 1;
  std::size_t tables = 1;
  std::size_t chairs = 2;
  std::size_t furniture = 2;
  std::size_t small_objects = 3;
  // Random placements tried per object before PlacementError is raised.
  std::size_t max_attempts = 200;
};

// Deterministic per (seed, config). Requires every extent >= 8.
SemanticVolume generate_scene(std::uint64_t seed, const SceneConfig& config = {});

}  // namespace ssc::scene
