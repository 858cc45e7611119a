#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ssc/key_value.hpp"

namespace ssc::models {

// Shape plan of the five networks. The depth image's first axis becomes the
// latent d axis and its second axis the latent h axis; the encoder's final
// channels split into (latent w) x (latent channels), channel-fastest.
struct ArchConfig {
  std::size_t depth_width = 320;   // image first axis
  std::size_t depth_height = 240;  // image second axis
  std::size_t pool_pairs = 6;      // conv + pool + leaky-ReLU pairs in the depth encoder
  std::size_t latent_d = 5;
  std::size_t latent_h = 3;
  std::size_t latent_w = 5;
  std::size_t latent_channels = 16;
  std::size_t deconv_layers = 4;  // also the stride-2 conv count of E_vox and D_vox
  std::size_t volume_d = 80;
  std::size_t volume_h = 48;
  std::size_t volume_w = 80;
  std::size_t num_categories = 12;
  double leaky_slope = 0.2;

  // Per-layer output channels. Empty lists take the defaults below.
  std::vector<std::size_t> encoder_widths;      // pool_pairs entries, last = latent_w * latent_channels
  std::vector<std::size_t> vox_encoder_widths;  // deconv_layers entries, last = 2 * latent_channels
  std::vector<std::size_t> generator_widths;    // deconv_layers entries, last = num_categories
  std::vector<std::size_t> disc_widths;         // deconv_layers entries, last = latent_channels
  std::vector<std::size_t> dense_widths{256, 128};  // hidden layers of both discriminators

  static ArchConfig paper();
  // Small configuration used for tests and CPU training runs.
  static ArchConfig desk();

  std::size_t latent_size() const { return latent_d * latent_h * latent_w * latent_channels; }
  std::size_t encoder_final_width() const { return latent_w * latent_channels; }

  // Widths with defaults applied:
  //   encoder: min(8 * 2^i, final), last = final
  //   E_vox / D_vox: 8 * 2^i, last = 2C / C
  //   generator: C * 2^(Q-1-i), last = N_c
  std::vector<std::size_t> resolved_encoder_widths() const;
  std::vector<std::size_t> resolved_vox_encoder_widths() const;
  std::vector<std::size_t> resolved_generator_widths() const;
  std::vector<std::size_t> resolved_disc_widths() const;

  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

// Appends "arch.*" lines in canonical order.
void write_canonical(std::string& out, const ArchConfig& cfg);
// Consumes "arch.*" keys.
void read_keys(KeyValues& kv, ArchConfig& cfg);

}  // namespace ssc::models
