#include "ssc/models/networks.hpp"

#include "ssc/autodiff/ops.hpp"
#include "ssc/errors.hpp"
#include "ssc/models/shape_plan.hpp"

namespace ssc::models {
namespace {

using ad::Shape;
using ad::Tensor;

std::string layer_name(const char* kind, std::size_t i, const char* part) {
  return std::string(kind) + std::to_string(i) + "." + part;
}

void expect_shape(const Tensor& t, const Shape& expected, const char* what) {
  if (t.shape() != expected) {
    throw ShapeError(std::string(what) + ": expected " + ad::shape_to_string(expected) + ", got " +
                     ad::shape_to_string(t.shape()));
  }
}

Shape latent_shape(const ArchConfig& c) { return {c.latent_d, c.latent_h, c.latent_w, c.latent_channels}; }
Shape volume_shape(const ArchConfig& c) { return {c.volume_d, c.volume_h, c.volume_w, c.num_categories}; }

// Adds stride-2 3x3x3 conv layers "conv<i>.kernel" / "conv<i>.bias".
void add_conv3d_stack(ad::ParamSet& params, std::size_t in_channels,
                      const std::vector<std::size_t>& widths, Rng& rng) {
  std::size_t cin = in_channels;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    params.add_glorot(layer_name("conv", i, "kernel"), {3, 3, 3, cin, widths[i]}, 27 * cin,
                      27 * widths[i], rng);
    params.add(layer_name("conv", i, "bias"), {widths[i]});
    cin = widths[i];
  }
}

// Runs the stack; leaky ReLU after every layer except the last when `linear_last`.
Tensor run_conv3d_stack(const ad::ParamSet& params, Tensor x, std::size_t layers, double slope,
                        bool linear_last) {
  for (std::size_t i = 0; i < layers; ++i) {
    x = ad::conv3d(x, params.get(layer_name("conv", i, "kernel")), {2, 2, 2}, ad::Padding::kSame);
    x = ad::add_channel_bias(x, params.get(layer_name("conv", i, "bias")));
    if (!(linear_last && i + 1 == layers)) x = ad::leaky_relu(x, slope);
  }
  return x;
}

ArchConfig validated(const ArchConfig& cfg) {
  const ShapePlan plan = validate_config(cfg);
  if (!plan.valid) throw ConfigError("invalid architecture: " + plan.error);
  return cfg;
}

}  // namespace

DepthEncoder::DepthEncoder(const ArchConfig& cfg, Rng& rng) : cfg_(validated(cfg)) {
  const auto widths = cfg_.resolved_encoder_widths();
  std::size_t cin = 2;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    params_.add_glorot(layer_name("conv", i, "kernel"), {3, 3, cin, widths[i]}, 9 * cin,
                       9 * widths[i], rng);
    params_.add(layer_name("conv", i, "bias"), {widths[i]});
    cin = widths[i];
  }
}

LatentCode DepthEncoder::forward(const Tensor& input) const {
  expect_shape(input, {cfg_.depth_width, cfg_.depth_height, 2}, "depth encoder input");
  Tensor x = input;
  for (std::size_t i = 0; i < cfg_.pool_pairs; ++i) {
    x = ad::conv2d(x, params_.get(layer_name("conv", i, "kernel")), {1, 1}, ad::Padding::kSame);
    x = ad::add_channel_bias(x, params_.get(layer_name("conv", i, "bias")));
    x = ad::maxpool2d(x);
    x = ad::leaky_relu(x, cfg_.leaky_slope);
  }
  return {ad::reshape(x, latent_shape(cfg_)), LatentOrigin::kFromDepth};
}

VolumeEncoder::VolumeEncoder(const ArchConfig& cfg, Rng& rng) : cfg_(validated(cfg)) {
  add_conv3d_stack(params_, cfg_.num_categories, cfg_.resolved_vox_encoder_widths(), rng);
}

VaeLatent VolumeEncoder::forward(const Tensor& one_hot, Rng* noise) const {
  expect_shape(one_hot, volume_shape(cfg_), "volume encoder input");
  const Tensor h = run_conv3d_stack(params_, one_hot, cfg_.deconv_layers, cfg_.leaky_slope, true);
  const std::size_t c = cfg_.latent_channels;
  VaeLatent out{ad::slice_last_axis(h, 0, c), ad::slice_last_axis(h, c, 2 * c), {}};
  if (noise == nullptr) {
    out.sample = {out.mu, LatentOrigin::kFromVolume};
    return out;
  }
  std::vector<double> eps(out.mu.numel());
  for (double& e : eps) e = noise->normal();
  const Tensor std_dev = ad::exp(ad::scale(out.logvar, 0.5));
  const Tensor z = ad::add(out.mu, ad::mul(std_dev, Tensor::from_values(out.mu.shape(), std::move(eps))));
  out.sample = {z, LatentOrigin::kFromVolume};
  return out;
}

Generator::Generator(const ArchConfig& cfg, Rng& rng) : cfg_(validated(cfg)) {
  const auto widths = cfg_.resolved_generator_widths();
  std::size_t cin = cfg_.latent_channels;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    params_.add_glorot(layer_name("deconv", i, "kernel"), {3, 3, 3, widths[i], cin}, 27 * cin,
                       27 * widths[i], rng);
    params_.add(layer_name("deconv", i, "bias"), {widths[i]});
    cin = widths[i];
  }
}

ProbVolume Generator::forward(const Tensor& latent) const {
  expect_shape(latent, latent_shape(cfg_), "generator input");
  Tensor x = latent;
  for (std::size_t i = 0; i < cfg_.deconv_layers; ++i) {
    x = ad::deconv3d(x, params_.get(layer_name("deconv", i, "kernel")), {2, 2, 2});
    x = ad::add_channel_bias(x, params_.get(layer_name("deconv", i, "bias")));
    x = i + 1 == cfg_.deconv_layers ? ad::sigmoid(x) : ad::relu(x);
  }
  return {x};
}

DenseHead::DenseHead(const std::string& prefix, std::size_t input,
                     const std::vector<std::size_t>& hidden, double leaky_slope, ad::ParamSet& params,
                     Rng& rng)
    : prefix_(prefix), layers_(hidden.size() + 1), leaky_slope_(leaky_slope) {
  std::size_t in = input;
  for (std::size_t i = 0; i < layers_; ++i) {
    const std::size_t out = i < hidden.size() ? hidden[i] : 1;
    params.add_glorot(prefix_ + layer_name("dense", i, "weight"), {in, out}, in, out, rng);
    params.add(prefix_ + layer_name("dense", i, "bias"), {out});
    in = out;
  }
}

Tensor DenseHead::forward(const Tensor& flat, const ad::ParamSet& params) const {
  Tensor x = flat;
  for (std::size_t i = 0; i < layers_; ++i) {
    x = ad::dense(x, params.get(prefix_ + layer_name("dense", i, "weight")),
                  params.get(prefix_ + layer_name("dense", i, "bias")));
    x = i + 1 == layers_ ? ad::sigmoid(x) : ad::leaky_relu(x, leaky_slope_);
  }
  return x;
}

VolumeDiscriminator::VolumeDiscriminator(const ArchConfig& cfg, Rng& rng)
    : cfg_(validated(cfg)),
      head_([&]() -> DenseHead {
        add_conv3d_stack(params_, cfg_.num_categories, cfg_.resolved_disc_widths(), rng);
        return DenseHead("", cfg_.latent_size(), cfg_.dense_widths, cfg_.leaky_slope, params_, rng);
      }()) {}

Tensor VolumeDiscriminator::forward(const Tensor& volume) const {
  expect_shape(volume, volume_shape(cfg_), "volume discriminator input");
  const Tensor h = run_conv3d_stack(params_, volume, cfg_.deconv_layers, cfg_.leaky_slope, false);
  return head_.forward(ad::reshape(h, {cfg_.latent_size()}), params_);
}

LatentDiscriminator::LatentDiscriminator(const ArchConfig& cfg, Rng& rng)
    : cfg_(validated(cfg)),
      head_("", cfg_.latent_size(), cfg_.dense_widths, cfg_.leaky_slope, params_, rng) {}

Tensor LatentDiscriminator::forward(const Tensor& latent) const {
  expect_shape(latent, latent_shape(cfg_), "latent discriminator input");
  return head_.forward(ad::reshape(latent, {cfg_.latent_size()}), params_);
}

Networks Networks::create(const ArchConfig& cfg, std::uint64_t seed) {
  const ArchConfig checked = validated(cfg);
  Rng rng(seed);
  return Networks{checked,
                  DepthEncoder(checked, rng),
                  VolumeEncoder(checked, rng),
                  Generator(checked, rng),
                  VolumeDiscriminator(checked, rng),
                  LatentDiscriminator(checked, rng)};
}

LatentCode encode_depth(const scene::DepthImage& x, const DepthEncoder& enc) {
  return enc.forward(x.to_input_tensor());
}

VaeLatent encode_volume(const scene::SemanticVolume& t, const VolumeEncoder& enc, Rng* noise) {
  return enc.forward(t.one_hot(), noise);
}

VaeLatent encode_volume(const Tensor& one_hot, const VolumeEncoder& enc, Rng* noise) {
  if (one_hot.rank() != 4) throw ShapeError("encode_volume expects a [D,H,W,N_c] tensor");
  const std::size_t nc = one_hot.shape()[3];
  const auto v = one_hot.values();
  for (std::size_t voxel = 0; voxel < one_hot.numel() / nc; ++voxel) {
    std::size_t ones = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      const double x = v[voxel * nc + c];
      if (x == 1.0) {
        ++ones;
      } else if (x != 0.0) {
        ones = 2;
        break;
      }
    }
    if (ones != 1) {
      throw std::invalid_argument("encode_volume: voxel " + std::to_string(voxel) + " is not one-hot");
    }
  }
  return enc.forward(one_hot, noise);
}

ProbVolume generate(const LatentCode& latent, const Generator& gen) { return gen.forward(latent.value); }

Tensor disc_vox(const Tensor& volume, const VolumeDiscriminator& d) { return d.forward(volume); }

Tensor disc_lat(const LatentCode& latent, const LatentDiscriminator& d) { return d.forward(latent.value); }

Tensor kl_divergence(const Tensor& mu, const Tensor& logvar) {
  const Tensor terms = ad::sub(ad::add(ad::exp(logvar), ad::mul(mu, mu)), ad::add_scalar(logvar, 1.0));
  return ad::scale(ad::sum(terms), 0.5);
}

}  // namespace ssc::models
