#pragma once

#include <cstdint>

#include "ssc/autodiff/param_set.hpp"
#include "ssc/autodiff/tensor.hpp"
#include "ssc/models/arch_config.hpp"
#include "ssc/rng.hpp"
#include "ssc/scene/depth.hpp"
#include "ssc/scene/volume.hpp"

namespace ssc::models {

enum class LatentOrigin { kFromDepth, kFromVolume };

// [d, h, w, C]
struct LatentCode {
  ad::Tensor value;
  LatentOrigin origin;
};

// [D, H, W, N_c], every value strictly inside (0, 1).
struct ProbVolume {
  ad::Tensor value;
};

struct VaeLatent {
  ad::Tensor mu;
  ad::Tensor logvar;
  LatentCode sample;  // mu + exp(logvar / 2) * eps
};

// E_dep: conv(3x3, stride 1, same) -> maxpool(2x2) -> leaky ReLU, repeated,
// then a reshape of the final [d, h, w*C] image into the latent grid.
class DepthEncoder {
 public:
  DepthEncoder(const ArchConfig& cfg, Rng& rng);
  // `input` is [depth_width, depth_height, 2] (depth, validity mask).
  LatentCode forward(const ad::Tensor& input) const;

  ad::ParamSet& params() { return params_; }
  const ad::ParamSet& params() const { return params_; }

 private:
  ArchConfig cfg_;
  ad::ParamSet params_;
};

// E_vox: stride-2 conv3d + leaky ReLU, with a linear last layer whose 2C
// channels split into mu (first C) and logvar (last C).
class VolumeEncoder {
 public:
  VolumeEncoder(const ArchConfig& cfg, Rng& rng);
  // `one_hot` is [D, H, W, N_c]. With `noise == nullptr` the sample equals mu.
  VaeLatent forward(const ad::Tensor& one_hot, Rng* noise) const;

  ad::ParamSet& params() { return params_; }
  const ad::ParamSet& params() const { return params_; }

 private:
  ArchConfig cfg_;
  ad::ParamSet params_;
};

// G: stride-2 deconv3d layers, ReLU between layers, sigmoid per category
// channel at the end.
class Generator {
 public:
  Generator(const ArchConfig& cfg, Rng& rng);
  ProbVolume forward(const ad::Tensor& latent) const;

  ad::ParamSet& params() { return params_; }
  const ad::ParamSet& params() const { return params_; }

 private:
  ArchConfig cfg_;
  ad::ParamSet params_;
};

// Hidden dense layers with leaky ReLU, then a single sigmoid unit.
class DenseHead {
 public:
  DenseHead(const std::string& prefix, std::size_t input, const std::vector<std::size_t>& hidden,
            double leaky_slope, ad::ParamSet& params, Rng& rng);
  ad::Tensor forward(const ad::Tensor& flat, const ad::ParamSet& params) const;

 private:
  std::string prefix_;
  std::size_t layers_;
  double leaky_slope_;
};

// D_vox: stride-2 conv3d + leaky ReLU down to the latent grid, flatten,
// dense head. Returns a [1] probability.
class VolumeDiscriminator {
 public:
  VolumeDiscriminator(const ArchConfig& cfg, Rng& rng);
  ad::Tensor forward(const ad::Tensor& volume) const;

  ad::ParamSet& params() { return params_; }
  const ad::ParamSet& params() const { return params_; }

 private:
  ArchConfig cfg_;
  ad::ParamSet params_;
  DenseHead head_;
};

// D_l: flatten the latent code, dense head. Returns a [1] probability.
class LatentDiscriminator {
 public:
  LatentDiscriminator(const ArchConfig& cfg, Rng& rng);
  ad::Tensor forward(const ad::Tensor& latent) const;

  ad::ParamSet& params() { return params_; }
  const ad::ParamSet& params() const { return params_; }

 private:
  ArchConfig cfg_;
  ad::ParamSet params_;
  DenseHead head_;
};

// All five networks, initialized from one seed. Throws ConfigError if the
// configuration does not validate.
struct Networks {
  ArchConfig config;
  DepthEncoder e_dep;
  VolumeEncoder e_vox;
  Generator gen;
  VolumeDiscriminator d_vox;
  LatentDiscriminator d_lat;

  static Networks create(const ArchConfig& cfg, std::uint64_t seed);
};

// Thin entry points over the network classes.
LatentCode encode_depth(const scene::DepthImage& x, const DepthEncoder& enc);
VaeLatent encode_volume(const scene::SemanticVolume& t, const VolumeEncoder& enc, Rng* noise);
// Rejects tensors that are not one-hot per voxel.
VaeLatent encode_volume(const ad::Tensor& one_hot, const VolumeEncoder& enc, Rng* noise);
ProbVolume generate(const LatentCode& latent, const Generator& gen);
ad::Tensor disc_vox(const ad::Tensor& volume, const VolumeDiscriminator& d);
ad::Tensor disc_lat(const LatentCode& latent, const LatentDiscriminator& d);

// KL(N(mu, exp(logvar)) || N(0, I)) = 0.5 * sum(exp(logvar) + mu^2 - 1 - logvar).
ad::Tensor kl_divergence(const ad::Tensor& mu, const ad::Tensor& logvar);

}  // namespace ssc::models
