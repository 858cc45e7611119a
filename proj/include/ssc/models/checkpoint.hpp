#pragma once

// Checkpoint layout (VSEM kind 2, rank 0, dtype f64):
//   str config_text | u32 tensor_count
//   | per tensor: str name | u8 rank | u32 extents[rank] | f64 values[numel]
// Parameter sets are stored under "<net>/<param>", with Adam moments as
// "<net>/<param>#m" and "<net>/<param>#v" and the step counter as
// "<net>/#adam_steps".

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ssc/autodiff/param_set.hpp"
#include "ssc/models/networks.hpp"

namespace ssc::models {

struct CheckpointTensor {
  std::string name;
  ad::Shape shape;
  std::vector<double> values;

  friend bool operator==(const CheckpointTensor&, const CheckpointTensor&) = default;
};

struct Checkpoint {
  std::string config_text;
  std::vector<CheckpointTensor> tensors;

  const CheckpointTensor* find(const std::string& name) const;
  // Throws FormatError(kBadHeader) when missing or of a different shape.
  const CheckpointTensor& require(const std::string& name, const ad::Shape& shape) const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

void store_param_set(Checkpoint& ckpt, const std::string& prefix, const ad::ParamSet& params);
void restore_param_set(const Checkpoint& ckpt, const std::string& prefix, ad::ParamSet& params);

// All five networks under the prefixes e_dep, e_vox, gen, d_vox, d_lat.
void store_networks(Checkpoint& ckpt, const Networks& nets);
void restore_networks(const Checkpoint& ckpt, Networks& nets);

}  // namespace ssc::models
