#include "ssc/scene/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssc/errors.hpp"
#include "ssc/rng.hpp"
#include "ssc/scene/render.hpp"
#include "ssc/scene/transforms.hpp"

namespace ssc::scene {

void Dataset::validate() const {
  if (samples.empty()) return;
  const Sample& first = samples.front();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (s.volume.extents() != first.volume.extents() ||
        s.volume.num_categories() != first.volume.num_categories()) {
      throw ShapeError("sample " + std::to_string(i) + ": volume " + to_string(s.volume.extents()) +
                       " differs from " + to_string(first.volume.extents()));
    }
    if (s.depth.width() != first.depth.width() || s.depth.height() != first.depth.height()) {
      throw ShapeError("sample " + std::to_string(i) + ": depth extents differ from sample 0");
    }
  }
}

Sample make_synthetic_sample(std::uint64_t seed, const SyntheticConfig& config) {
  SceneConfig scene = config.scene;
  scene.extents = {config.volume_extents.d * config.scale, config.volume_extents.h * config.scale,
                   config.volume_extents.w * config.scale};
  const SemanticVolume fine = generate_scene(seed, scene);
  const double voxel_size = config.room_width_m / static_cast<double>(scene.extents.d);
  const CameraModel cam = CameraModel::pinhole(
      scene.extents, config.depth_width * config.render_scale,
      config.depth_height * config.render_scale, config.vertical_fov_deg, voxel_size,
      static_cast<double>(scene.wall_thickness));
  const DepthImage rendered = render_depth(fine, cam);
  return Sample{resize_depth(rendered, config.depth_width, config.depth_height),
                downsample_volume(fine, config.scale)};
}

Dataset make_synthetic_dataset(const SyntheticConfig& config) {
  Dataset ds;
  Rng seeds(config.seed);
  ds.samples.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    ds.samples.push_back(make_synthetic_sample(seeds.next_u64(), config));
  }
  ds.provenance["generator"] = "synthetic-room";
  ds.provenance["seed"] = std::to_string(config.seed);
  ds.provenance["count"] = std::to_string(config.count);
  ds.provenance["volume_extents"] = to_string(config.volume_extents);
  ds.provenance["depth_extents"] =
      std::to_string(config.depth_width) + "x" + std::to_string(config.depth_height);
  ds.provenance["scale"] = std::to_string(config.scale);
  ds.provenance["render_scale"] = std::to_string(config.render_scale);
  return ds;
}

namespace {
std::string sample_stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "sample_%05zu", i);
  return buf;
}
}  // namespace

void save_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FormatError(FormatError::Kind::kIo, "cannot create " + dir.string());
  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw FormatError(FormatError::Kind::kIo, "cannot write manifest in " + dir.string());
  manifest << "samples=" << dataset.size() << '\n';
  for (const auto& [key, value] : dataset.provenance) {
    if (key != "samples") manifest << key << '=' << value << '\n';
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    save_sample(dir / sample_stem(i), dataset.samples[i]);
  }
}

Dataset load_dataset(const std::filesystem::path& dir, std::size_t num_categories) {
  std::ifstream manifest(dir / "manifest.txt");
  if (!manifest) throw FormatError(FormatError::Kind::kIo, "no manifest.txt in " + dir.string());
  Dataset ds;
  std::string line;
  std::size_t count = 0;
  bool have_count = false;
  while (std::getline(manifest, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "samples") {
      try {
        count = std::stoul(value);
      } catch (const std::exception&) {
        throw FormatError(FormatError::Kind::kBadHeader, "bad sample count in manifest");
      }
      have_count = true;
    } else {
      ds.provenance[key] = value;
    }
  }
  if (!have_count) throw FormatError(FormatError::Kind::kBadHeader, "manifest lacks samples=");
  for (std::size_t i = 0; i < count; ++i) {
    ds.samples.push_back(load_sample(dir / sample_stem(i), num_categories));
  }
  ds.validate();
  return ds;
}

}  // namespace ssc::scene
