#pragma once

#include <cstdint>
#include <string>

#include "ssc/models/arch_config.hpp"
#include "ssc/scene/dataset.hpp"
#include "ssc/train/hyper_params.hpp"

namespace ssc::train {

// Data and cross-validation settings of a full experiment.
struct ExperimentConfig {
  std::size_t folds = 2;
  std::size_t samples = 8;
  std::uint64_t data_seed = 1;
  std::uint64_t split_seed = 1;
  std::size_t scale = 3;
  std::size_t render_scale = 2;
  std::string data_dir;  // empty: generate synthetic data in memory

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct RunConfig {
  models::ArchConfig arch = models::ArchConfig::desk();
  HyperParams train;
  ExperimentConfig experiment;

  // Canonical text: every key, fixed order, exact doubles.
  std::string canonical() const;
  // Unspecified keys keep their defaults; unknown keys, bad values and
  // invalid architectures raise ConfigError.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  // Hex FNV-1a of the canonical text.
  std::string fingerprint() const;
  scene::SyntheticConfig synthetic() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace ssc::train
