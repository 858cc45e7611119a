#include "ssc/train/config_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssc/errors.hpp"
#include "ssc/models/shape_plan.hpp"

namespace ssc::train {

std::string RunConfig::canonical() const {
  std::string out;
  models::write_canonical(out, arch);
  write_canonical(out, train);
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  line("experiment.folds", std::to_string(experiment.folds));
  line("experiment.samples", std::to_string(experiment.samples));
  line("experiment.data_seed", std::to_string(experiment.data_seed));
  line("experiment.split_seed", std::to_string(experiment.split_seed));
  line("experiment.scale", std::to_string(experiment.scale));
  line("experiment.render_scale", std::to_string(experiment.render_scale));
  line("experiment.data_dir", experiment.data_dir);
  return out;
}

RunConfig RunConfig::parse(const std::string& text) {
  KeyValues kv = KeyValues::parse(text);
  RunConfig cfg;
  models::read_keys(kv, cfg.arch);
  read_keys(kv, cfg.train);
  kv.take("experiment.folds", cfg.experiment.folds);
  kv.take("experiment.samples", cfg.experiment.samples);
  kv.take_u64("experiment.data_seed", cfg.experiment.data_seed);
  kv.take_u64("experiment.split_seed", cfg.experiment.split_seed);
  kv.take("experiment.scale", cfg.experiment.scale);
  kv.take("experiment.render_scale", cfg.experiment.render_scale);
  kv.take("experiment.data_dir", cfg.experiment.data_dir);
  kv.expect_empty();

  cfg.train.validate();
  const models::ShapePlan plan = models::validate_config(cfg.arch);
  if (!plan.valid) throw ConfigError("invalid architecture: " + plan.error);
  if (cfg.experiment.scale == 0 || cfg.experiment.render_scale == 0) {
    throw ConfigError("experiment.scale and experiment.render_scale must be positive");
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(FormatError::Kind::kIo, "cannot read config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::string RunConfig::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

scene::SyntheticConfig RunConfig::synthetic() const {
  scene::SyntheticConfig s;
  s.count = experiment.samples;
  s.seed = experiment.data_seed;
  s.volume_extents = {arch.volume_d, arch.volume_h, arch.volume_w};
  s.depth_width = arch.depth_width;
  s.depth_height = arch.depth_height;
  s.scale = experiment.scale;
  s.render_scale = experiment.render_scale;
  return s;
}

}  // namespace ssc::train
