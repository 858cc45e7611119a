#include "ssc/scene/generator.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "ssc/errors.hpp"
#include "ssc/rng.hpp"

namespace ssc::scene {
namespace {

struct Box {
  std::size_t d0, h0, w0;  // inclusive lower corner
  std::size_t d1, h1, w1;  // exclusive upper corner

  bool overlaps(const Box& o, std::size_t margin) const {
    return d0 < o.d1 + margin && o.d0 < d1 + margin && h0 < o.h1 && o.h0 < h1 &&
           w0 < o.w1 + margin && o.w0 < w1 + margin;
  }
};

void fill(SemanticVolume& vol, const Box& b, std::uint8_t label) {
  for (std::size_t d = b.d0; d < b.d1; ++d) {
    for (std::size_t h = b.h0; h < b.h1; ++h) {
      for (std::size_t w = b.w0; w < b.w1; ++w) vol.set(d, h, w, label);
    }
  }
}

std::size_t scaled(std::size_t extent, double fraction) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(extent) * fraction));
}

class RoomBuilder {
 public:
  RoomBuilder(std::uint64_t seed, const SceneConfig& cfg)
      : rng_(seed), cfg_(cfg), vol_(cfg.extents) {}

  SemanticVolume build() {
    shell();
    for (std::size_t i = 0; i < cfg_.doors; ++i) aperture(kDoor, 0.0, 0.6, 0.10, 0.16);
    for (std::size_t i = 0; i < cfg_.windows; ++i) aperture(kWindow, 0.35, 0.30, 0.12, 0.2);
    for (std::size_t i = 0; i < cfg_.beds; ++i) floor_object(kBed, {0.28, 0.38}, {0.10, 0.14}, {0.35, 0.45});
    for (std::size_t i = 0; i < cfg_.sofas; ++i) floor_object(kSofa, {0.28, 0.36}, {0.10, 0.14}, {0.12, 0.16});
    for (std::size_t i = 0; i < cfg_.tables; ++i) floor_object(kTable, {0.15, 0.22}, {0.18, 0.22}, {0.15, 0.22});
    for (std::size_t i = 0; i < cfg_.chairs; ++i) floor_object(kChair, {0.07, 0.10}, {0.12, 0.16}, {0.07, 0.10});
    for (std::size_t i = 0; i < cfg_.furniture; ++i) floor_object(kFurniture, {0.12, 0.18}, {0.30, 0.45}, {0.08, 0.12});
    for (std::size_t i = 0; i < cfg_.small_objects; ++i) small_object();
    return std::move(vol_);
  }

 private:
  struct Range {
    double lo, hi;
  };

  std::size_t pick(std::size_t extent, Range r) { return scaled(extent, rng_.uniform(r.lo, r.hi)); }

  // Uniform integer in [lo, hi]; requires lo <= hi.
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng_.below(hi - lo + 1));
  }

  void shell() {
    const Extents3& e = cfg_.extents;
    const std::size_t t = cfg_.wall_thickness;
    fill(vol_, {0, 0, 0, t, e.h, e.w}, kWall);
    fill(vol_, {e.d - t, 0, 0, e.d, e.h, e.w}, kWall);
    fill(vol_, {0, 0, 0, e.d, e.h, t}, kWall);
    fill(vol_, {0, 0, e.w - t, e.d, e.h, e.w}, kWall);
    fill(vol_, {0, 0, 0, e.d, 1, e.w}, kFloor);
    fill(vol_, {0, e.h - 1, 0, e.d, e.h, e.w}, kCeiling);
  }

  // Replaces a rectangle of one side or back wall. Heights are fractions of
  // the room height measured from the floor.
  void aperture(std::uint8_t label, double bottom, double height, double width_lo, double width_hi) {
    const Extents3& e = cfg_.extents;
    const std::size_t t = cfg_.wall_thickness;
    for (std::size_t attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
      const std::size_t wall = static_cast<std::size_t>(rng_.below(3));  // left, right, back
      const std::size_t along_extent = wall == 2 ? e.d : e.w;
      const std::size_t span = pick(along_extent, {width_lo, width_hi});
      const std::size_t h0 = std::max<std::size_t>(1, scaled(e.h, bottom));
      const std::size_t h1 = std::min(e.h - 1, h0 + scaled(e.h, height));
      if (span + 2 * t + 2 > along_extent || h0 >= h1) continue;
      const std::size_t start = between(t + 1, along_extent - t - 1 - span);
      Box b{};
      if (wall == 0) b = {0, h0, start, t, h1, start + span};
      if (wall == 1) b = {e.d - t, h0, start, e.d, h1, start + span};
      if (wall == 2) b = {start, h0, e.w - t, start + span, h1, e.w};
      bool clash = false;
      for (const Box& o : apertures_) clash = clash || b.overlaps(o, 1);
      if (clash) continue;
      apertures_.push_back(b);
      fill(vol_, b, label);
      return;
    }
    throw PlacementError("could not place aperture of category " + std::to_string(label));
  }

  void floor_object(std::uint8_t label, Range d_frac, Range h_frac, Range w_frac) {
    const Extents3& e = cfg_.extents;
    const std::size_t t = cfg_.wall_thickness;
    for (std::size_t attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
      const bool rotate = rng_.below(2) == 1;
      std::size_t sd = pick(e.d, d_frac);
      std::size_t sw = pick(e.w, w_frac);
      if (rotate) std::swap(sd, sw);
      const std::size_t sh = std::min(pick(e.h, h_frac), e.h - 3);
      if (sd + 2 * t > e.d || sw + 2 * t + 1 > e.w) continue;
      const std::size_t d0 = between(t, e.d - t - sd);
      // Keep one free layer in front of the camera wall.
      const std::size_t w0 = between(t + 1, e.w - t - sw);
      const Box b{d0, 1, w0, d0 + sd, 1 + sh, w0 + sw};
      bool clash = false;
      for (const Box& o : objects_) clash = clash || b.overlaps(o, 1);
      if (clash) continue;
      objects_.push_back(b);
      fill(vol_, b, label);
      if (label == kTable || label == kFurniture) supports_.push_back(b);
      return;
    }
    throw PlacementError("could not place object of category " + std::to_string(label) +
                         " in a " + to_string(cfg_.extents) + " room");
  }

  // A small box on top of a table or furniture; on the floor if neither exists.
  void small_object() {
    const Extents3& e = cfg_.extents;
    for (std::size_t attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
      const std::size_t size = std::max<std::size_t>(1, e.d / 30);
      const std::size_t tall = std::max<std::size_t>(1, e.h / 24);
      Box base{};
      if (supports_.empty()) {
        const std::size_t t = cfg_.wall_thickness;
        base = {t, 0, t + 1, e.d - t, 1, e.w - t};
      } else {
        base = supports_[rng_.below(supports_.size())];
      }
      if (base.d1 - base.d0 < size || base.w1 - base.w0 < size || base.h1 + tall >= e.h - 1) continue;
      const std::size_t d0 = between(base.d0, base.d1 - size);
      const std::size_t w0 = between(base.w0, base.w1 - size);
      const Box b{d0, base.h1, w0, d0 + size, base.h1 + tall, w0 + size};
      bool clash = false;
      for (const Box& o : smalls_) clash = clash || b.overlaps(o, 0);
      if (supports_.empty()) {
        for (const Box& o : objects_) clash = clash || b.overlaps(o, 0);
      }
      if (clash) continue;
      smalls_.push_back(b);
      fill(vol_, b, kSmallObjects);
      return;
    }
    throw PlacementError("could not place small object");
  }

  Rng rng_;
  SceneConfig cfg_;
  SemanticVolume vol_;
  std::vector<Box> apertures_;
  std::vector<Box> objects_;
  std::vector<Box> supports_;
  std::vector<Box> smalls_;
};

}  // namespace

SemanticVolume generate_scene(std::uint64_t seed, const SceneConfig& config) {
  const Extents3& e = config.extents;
  if (e.d < 8 || e.h < 8 || e.w < 8) {
    throw ShapeError("scene extents must be >= 8 per axis, got " + to_string(e));
  }
  if (config.wall_thickness == 0 || 4 * config.wall_thickness >= std::min(e.d, e.w)) {
    throw ShapeError("wall thickness does not fit the room");
  }
  return RoomBuilder(seed, config).build();
}

}  // namespace ssc::scene
