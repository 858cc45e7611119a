#pragma once

#include <cstdint>
#include <string>

#include "ssc/key_value.hpp"

namespace ssc::train {

enum class Reduction { kSum, kMean };

// kErrorAboveTau: update while accuracy < 1 - tau.
// kAccuracyBelowTau: update while accuracy < tau.
enum class GateRule { kErrorAboveTau, kAccuracyBelowTau };

struct HyperParams {
  double gamma = 0.85;  // weight of positive (occupied) targets in the reconstruction loss
  double learning_rate = 1e-4;
  std::size_t batch_size = 4;
  double kl_weight = 1.0;
  double gate_tau = 0.15;
  GateRule gate_rule = GateRule::kErrorAboveTau;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double prob_clamp = 1e-7;
  Reduction reduction = Reduction::kSum;
  std::size_t total_steps = 1000;
  std::uint64_t seed = 1;
  std::size_t checkpoint_every = 0;  // 0 writes only the final checkpoint
  // Scale of the VAE, volume-adversarial and latent-adversarial sub-updates.
  // A weight of 0 skips the sub-updates that serve that term.
  double weight_vae = 1.0;
  double weight_gan_y = 1.0;
  double weight_gan_l = 1.0;

  // Throws ConfigError naming the first out-of-range field.
  void validate() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

void write_canonical(std::string& out, const HyperParams& hp);
// Consumes "train.*" keys.
void read_keys(KeyValues& kv, HyperParams& hp);

}  // namespace ssc::train
