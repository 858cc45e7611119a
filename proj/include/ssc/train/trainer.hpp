#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ssc/models/checkpoint.hpp"
#include "ssc/models/networks.hpp"
#include "ssc/rng.hpp"
#include "ssc/scene/vsem.hpp"
#include "ssc/train/config_file.hpp"
#include "ssc/train/hyper_params.hpp"

namespace ssc::train {

// One train_step. Sub-losses are batch sums before weighting; a disabled
// sub-update records 0.
struct StepRecord {
  std::size_t step = 0;
  double loss_recon = 0.0;       // (a) depth -> volume reconstruction
  double loss_vae = 0.0;         // (b) volume auto-encoder with KL
  double loss_gan_l_enc = 0.0;   // (c) depth encoder against the latent discriminator
  double loss_gan_y_gen = 0.0;   // (d) depth -> volume against the volume discriminator
  double loss_gan_y_disc = 0.0;  // (e) volume discriminator
  double loss_gan_l_disc = 0.0;  // (f) latent discriminator
  bool update_d_vox = false;
  bool update_d_lat = false;
  double acc_d_vox = 0.0;
  double acc_d_lat = 0.0;
};

std::string loss_log_header();
std::string format_record(const StepRecord& r);

struct TrainState {
  models::Networks nets;
  HyperParams hp;
  std::size_t step = 0;
  // Batch accuracies seen by the most recent gate decisions.
  double acc_d_vox = 0.0;
  double acc_d_lat = 0.0;
  std::vector<StepRecord> history;
  Rng noise;

  static TrainState create(const models::ArchConfig& arch, const HyperParams& hp);
};

// Runs the six sub-updates (a)-(f) once on the batch. Throws ShapeError if
// a sample does not match the architecture and NumericError naming the
// sub-loss that became non-finite.
StepRecord train_step(TrainState& state, std::span<const scene::Sample> batch);

// Checkpoint of networks, optimizer state and step counters under the given
// configuration text.
models::Checkpoint make_checkpoint(const TrainState& state, const std::string& config_text);
void restore_checkpoint(const models::Checkpoint& ckpt, TrainState& state);

struct TrainOptions {
  std::filesystem::path out_dir;  // empty: nothing written
  std::function<void(const StepRecord&)> on_step;
};

// total_steps train_steps over shuffled batches of `train_set`. With an
// output directory, writes config.txt, losses.tsv, checkpoints and
// final.ckpt.
TrainState train(const RunConfig& config, std::span<const scene::Sample> train_set,
                 const TrainOptions& options = {});

}  // namespace ssc::train
