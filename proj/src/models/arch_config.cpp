#include "ssc/models/arch_config.hpp"

#include <algorithm>

namespace ssc::models {

ArchConfig ArchConfig::paper() { return ArchConfig{}; }

ArchConfig ArchConfig::desk() {
  ArchConfig cfg;
  cfg.depth_width = 80;
  cfg.depth_height = 60;
  cfg.pool_pairs = 4;
  cfg.latent_d = 5;
  cfg.latent_h = 3;
  cfg.latent_w = 5;
  cfg.latent_channels = 8;
  cfg.deconv_layers = 2;
  cfg.volume_d = 20;
  cfg.volume_h = 12;
  cfg.volume_w = 20;
  cfg.num_categories = 12;
  return cfg;
}

std::vector<std::size_t> ArchConfig::resolved_encoder_widths() const {
  if (!encoder_widths.empty()) return encoder_widths;
  std::vector<std::size_t> w;
  const std::size_t final_width = encoder_final_width();
  for (std::size_t i = 0; i < pool_pairs; ++i) {
    w.push_back(i + 1 == pool_pairs ? final_width : std::min<std::size_t>(std::size_t{8} << i, final_width));
  }
  return w;
}

std::vector<std::size_t> ArchConfig::resolved_vox_encoder_widths() const {
  if (!vox_encoder_widths.empty()) return vox_encoder_widths;
  std::vector<std::size_t> w;
  for (std::size_t i = 0; i < deconv_layers; ++i) {
    w.push_back(i + 1 == deconv_layers ? 2 * latent_channels : std::size_t{8} << i);
  }
  return w;
}

std::vector<std::size_t> ArchConfig::resolved_generator_widths() const {
  if (!generator_widths.empty()) return generator_widths;
  std::vector<std::size_t> w;
  for (std::size_t i = 0; i < deconv_layers; ++i) {
    w.push_back(i + 1 == deconv_layers ? num_categories : latent_channels << (deconv_layers - 1 - i));
  }
  return w;
}

std::vector<std::size_t> ArchConfig::resolved_disc_widths() const {
  if (!disc_widths.empty()) return disc_widths;
  std::vector<std::size_t> w;
  for (std::size_t i = 0; i < deconv_layers; ++i) {
    w.push_back(i + 1 == deconv_layers ? latent_channels : std::size_t{8} << i);
  }
  return w;
}

void write_canonical(std::string& out, const ArchConfig& c) {
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  line("arch.depth_width", std::to_string(c.depth_width));
  line("arch.depth_height", std::to_string(c.depth_height));
  line("arch.pool_pairs", std::to_string(c.pool_pairs));
  line("arch.latent_d", std::to_string(c.latent_d));
  line("arch.latent_h", std::to_string(c.latent_h));
  line("arch.latent_w", std::to_string(c.latent_w));
  line("arch.latent_channels", std::to_string(c.latent_channels));
  line("arch.deconv_layers", std::to_string(c.deconv_layers));
  line("arch.volume_d", std::to_string(c.volume_d));
  line("arch.volume_h", std::to_string(c.volume_h));
  line("arch.volume_w", std::to_string(c.volume_w));
  line("arch.num_categories", std::to_string(c.num_categories));
  line("arch.leaky_slope", format_double(c.leaky_slope));
  line("arch.encoder_widths", format_list(c.encoder_widths));
  line("arch.vox_encoder_widths", format_list(c.vox_encoder_widths));
  line("arch.generator_widths", format_list(c.generator_widths));
  line("arch.disc_widths", format_list(c.disc_widths));
  line("arch.dense_widths", format_list(c.dense_widths));
}

void read_keys(KeyValues& kv, ArchConfig& c) {
  kv.take("arch.depth_width", c.depth_width);
  kv.take("arch.depth_height", c.depth_height);
  kv.take("arch.pool_pairs", c.pool_pairs);
  kv.take("arch.latent_d", c.latent_d);
  kv.take("arch.latent_h", c.latent_h);
  kv.take("arch.latent_w", c.latent_w);
  kv.take("arch.latent_channels", c.latent_channels);
  kv.take("arch.deconv_layers", c.deconv_layers);
  kv.take("arch.volume_d", c.volume_d);
  kv.take("arch.volume_h", c.volume_h);
  kv.take("arch.volume_w", c.volume_w);
  kv.take("arch.num_categories", c.num_categories);
  kv.take("arch.leaky_slope", c.leaky_slope);
  kv.take("arch.encoder_widths", c.encoder_widths);
  kv.take("arch.vox_encoder_widths", c.vox_encoder_widths);
  kv.take("arch.generator_widths", c.generator_widths);
  kv.take("arch.disc_widths", c.disc_widths);
  kv.take("arch.dense_widths", c.dense_widths);
}

}  // namespace ssc::models
