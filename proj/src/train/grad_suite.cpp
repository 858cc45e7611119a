#include "ssc/train/grad_suite.hpp"

#include <functional>
#include <map>
#include <stdexcept>

#include "ssc/autodiff/ops.hpp"
#include "ssc/models/networks.hpp"
#include "ssc/rng.hpp"
#include "ssc/train/losses.hpp"

namespace ssc::train {
namespace {

using ad::NamedTensor;
using ad::Shape;
using ad::Tensor;

Tensor random_tensor(Rng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(ad::shape_numel(shape));
  for (double& x : v) x = rng.uniform(lo, hi);
  return Tensor::from_values(std::move(shape), std::move(v), true);
}

// Contracts an output with fixed random weights so every element matters.
Tensor project(const Tensor& y, const Tensor& weights) { return ad::sum(ad::mul(y, weights)); }

Tensor projection_for(Rng& rng, const Shape& shape) {
  std::vector<double> v(ad::shape_numel(shape));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from_values(shape, std::move(v));
}

struct Case {
  std::function<Tensor()> loss;
  std::vector<NamedTensor> inputs;
};

// Builds loss = <op(inputs), random weights>.
Case projected(Rng& rng, std::vector<NamedTensor> inputs, std::function<Tensor()> op) {
  const Tensor weights = projection_for(rng, op().shape());
  return {[op, weights] { return project(op(), weights); }, std::move(inputs)};
}

// Also moves zero-initialized biases off zero: exact zeros would put
// rectifiers and max-pool windows exactly on their kinks.
std::vector<NamedTensor> params_of(const std::string& prefix, ad::ParamSet& p, Rng& rng) {
  std::vector<NamedTensor> out;
  for (auto& e : p.entries()) {
    if (e.value.rank() == 1) {
      for (double& v : e.value.mutable_values()) v = rng.uniform(-0.1, 0.1);
    }
    out.push_back({prefix + "/" + e.name, e.value});
  }
  return out;
}

Tensor one_hot_tensor(Rng& rng, std::size_t voxels_shape_d, std::size_t h, std::size_t w, std::size_t nc) {
  std::vector<double> v(voxels_shape_d * h * w * nc, 0.0);
  for (std::size_t i = 0; i < voxels_shape_d * h * w; ++i) v[i * nc + rng.below(nc)] = 1.0;
  return Tensor::from_values({voxels_shape_d, h, w, nc}, std::move(v));
}

// Depth in meters plus a validity mask, like DepthImage::to_input_tensor.
Tensor depth_input(Rng& rng, const models::ArchConfig& cfg) {
  std::vector<double> v(cfg.depth_width * cfg.depth_height * 2);
  for (std::size_t i = 0; i < v.size(); i += 2) {
    const bool valid = rng.uniform() < 0.9;
    v[i] = valid ? rng.uniform(0.5, 5.0) : 0.0;
    v[i + 1] = valid ? 1.0 : 0.0;
  }
  return Tensor::from_values({cfg.depth_width, cfg.depth_height, 2}, std::move(v), true);
}

using Builder = std::function<Case(Rng&)>;

const std::map<std::string, Builder>& builders() {
  static const std::map<std::string, Builder> table = [] {
    std::map<std::string, Builder> t;
    t["elementwise"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {3, 4});
      Tensor b = random_tensor(rng, {3, 4});
      Tensor c = random_tensor(rng, {3, 4}, 0.5, 2.0);
      return projected(rng, {{"a", a}, {"b", b}, {"c", c}}, [a, b, c] {
        const Tensor x = ad::add(ad::mul(a, b), ad::scale(ad::sub(a, b), 0.7));
        return ad::add(ad::add_scalar(ad::exp(x), -0.3), ad::mul(ad::log(c), a));
      });
    };
    t["reductions"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {2, 5});
      Tensor b = random_tensor(rng, {2, 5});
      return Case{[a, b] { return ad::add(ad::scale(ad::sum(ad::mul(a, a)), 0.3), ad::mean(ad::mul(a, b))); },
                  {{"a", a}, {"b", b}}};
    };
    t["clamp"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {4, 4}, -2.0, 2.0);
      return projected(rng, {{"a", a}}, [a] { return ad::clamp(a, -0.9, 0.8); });
    };
    t["leaky_relu"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {4, 6});
      return projected(rng, {{"a", a}}, [a] { return ad::leaky_relu(a, 0.2); });
    };
    t["relu"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {4, 6});
      return projected(rng, {{"a", a}}, [a] { return ad::relu(a); });
    };
    t["sigmoid"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {4, 6}, -4.0, 4.0);
      return projected(rng, {{"a", a}}, [a] { return ad::sigmoid(a); });
    };
    t["reshape_slice"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {2, 3, 4});
      return projected(rng, {{"a", a}}, [a] { return ad::slice_last_axis(ad::reshape(a, {3, 8}), 2, 7); });
    };
    t["channel_bias"] = [](Rng& rng) {
      Tensor a = random_tensor(rng, {3, 2, 4});
      Tensor b = random_tensor(rng, {4});
      return projected(rng, {{"x", a}, {"bias", b}}, [a, b] { return ad::add_channel_bias(a, b); });
    };
    t["dense"] = [](Rng& rng) {
      Tensor x = random_tensor(rng, {7});
      Tensor w = random_tensor(rng, {7, 5});
      Tensor b = random_tensor(rng, {5});
      return projected(rng, {{"input", x}, {"weights", w}, {"bias", b}}, [x, w, b] { return ad::dense(x, w, b); });
    };
    t["conv2d_same"] = [](Rng& rng) {
      Tensor x = random_tensor(rng, {7, 6, 2});
      Tensor k = random_tensor(rng, {3, 3, 2, 3});
      return projected(rng, {{"input", x}, {"kernel", k}},
                       [x, k] { return ad::conv2d(x, k, {1, 1}, ad::Padding::kSame); });
    };
    t["conv2d_strided"] = [](Rng& rng) {
      Tensor x = random_tensor(rng, {8, 7, 2});
      Tensor k = random_tensor(rng, {3, 2, 2, 3});
      return projected(rng, {{"input", x}, {"kernel", k}},
                       [x, k] { return ad::conv2d(x, k, {2, 1}, ad::Padding::kValid); });
    };
    t["maxpool2d"] = [](Rng& rng) {
      Tensor x = random_tensor(rng, {6, 5, 3});
      return projected(rng, {{"input", x}}, [x] { return ad::maxpool2d(x); });
    };
    t["conv3d_same"] = [](Rng& rng) {
      Tensor x = random_tensor(rng, {6, 4, 5, 2});
      Tensor k = random_tensor(rng, {3, 3, 3, 2, 3});
      return projected(rng, {{"input", x}, {"kernel", k}},
                       [x, k] { return ad::conv3d(x, k, {2, 2, 2}, ad::Padding::kSame); });
    };
    t["conv3d_valid"] = [](Rng& rng) {
      Tensor x = random_tensor(rng, {5, 4, 6, 2});
      Tensor k = random_tensor(rng, {3, 2, 3, 2, 2});
      return projected(rng, {{"input", x}, {"kernel", k}},
                       [x, k] { return ad::conv3d(x, k, {1, 1, 2}, ad::Padding::kValid); });
    };
    t["deconv3d"] = [](Rng& rng) {
      Tensor x = random_tensor(rng, {3, 2, 4, 3});
      Tensor k = random_tensor(rng, {3, 3, 3, 2, 3});
      return projected(rng, {{"input", x}, {"kernel", k}}, [x, k] { return ad::deconv3d(x, k, {2, 2, 2}); });
    };
    t["weighted_bce"] = [](Rng& rng) {
      Tensor q = random_tensor(rng, {4, 3, 2, 3}, 0.05, 0.95);
      const Tensor target = one_hot_tensor(rng, 4, 3, 2, 3);
      return Case{[q, target] { return weighted_bce(q, target, 0.85); }, {{"prob", q}}};
    };
    t["gan_losses"] = [](Rng& rng) {
      Tensor real = random_tensor(rng, {1}, 0.05, 0.95);
      Tensor fake = random_tensor(rng, {1}, 0.05, 0.95);
      return Case{[real, fake] { return ad::add(loss_gan_disc(real, fake), loss_gan_gen(fake)); },
                  {{"d_real", real}, {"d_fake", fake}}};
    };
    t["kl_divergence"] = [](Rng& rng) {
      Tensor mu = random_tensor(rng, {2, 2, 2, 3});
      Tensor logvar = random_tensor(rng, {2, 2, 2, 3});
      return Case{[mu, logvar] { return models::kl_divergence(mu, logvar); }, {{"mu", mu}, {"logvar", logvar}}};
    };
    t["depth_encoder"] = [](Rng& rng) {
      const models::ArchConfig cfg = tiny_arch();
      const auto enc = std::make_shared<models::DepthEncoder>(cfg, rng);
      Tensor x = depth_input(rng, cfg);
      auto inputs = params_of("e_dep", enc->params(), rng);
      inputs.push_back({"input", x});
      return projected(rng, inputs, [enc, x] { return enc->forward(x).value; });
    };
    t["volume_encoder"] = [](Rng& rng) {
      const models::ArchConfig cfg = tiny_arch();
      const auto enc = std::make_shared<models::VolumeEncoder>(cfg, rng);
      const Tensor t = one_hot_tensor(rng, cfg.volume_d, cfg.volume_h, cfg.volume_w, cfg.num_categories);
      const std::uint64_t noise_seed = rng.next_u64();
      auto inputs = params_of("e_vox", enc->params(), rng);
      const Tensor w = projection_for(rng, {cfg.latent_d, cfg.latent_h, cfg.latent_w, cfg.latent_channels});
      return Case{[enc, t, w, noise_seed] {
                    Rng noise(noise_seed);
                    const models::VaeLatent z = enc->forward(t, &noise);
                    return ad::add(project(z.sample.value, w), models::kl_divergence(z.mu, z.logvar));
                  },
                  inputs};
    };
    t["generator"] = [](Rng& rng) {
      const models::ArchConfig cfg = tiny_arch();
      const auto gen = std::make_shared<models::Generator>(cfg, rng);
      Tensor l = random_tensor(rng, {cfg.latent_d, cfg.latent_h, cfg.latent_w, cfg.latent_channels});
      auto inputs = params_of("gen", gen->params(), rng);
      inputs.push_back({"latent", l});
      return projected(rng, inputs, [gen, l] { return gen->forward(l).value; });
    };
    t["volume_discriminator"] = [](Rng& rng) {
      const models::ArchConfig cfg = tiny_arch();
      const auto d = std::make_shared<models::VolumeDiscriminator>(cfg, rng);
      Tensor v = random_tensor(rng, {cfg.volume_d, cfg.volume_h, cfg.volume_w, cfg.num_categories}, 0.0, 1.0);
      auto inputs = params_of("d_vox", d->params(), rng);
      inputs.push_back({"volume", v});
      return Case{[d, v] { return loss_gan_gen(d->forward(v)); }, inputs};
    };
    t["latent_discriminator"] = [](Rng& rng) {
      const models::ArchConfig cfg = tiny_arch();
      const auto d = std::make_shared<models::LatentDiscriminator>(cfg, rng);
      Tensor l = random_tensor(rng, {cfg.latent_d, cfg.latent_h, cfg.latent_w, cfg.latent_channels});
      auto inputs = params_of("d_lat", d->params(), rng);
      inputs.push_back({"latent", l});
      return Case{[d, l] { return loss_gan_gen(d->forward(l)); }, inputs};
    };
    t["depth_to_volume"] = [](Rng& rng) {
      const models::ArchConfig cfg = tiny_arch();
      const auto enc = std::make_shared<models::DepthEncoder>(cfg, rng);
      const auto gen = std::make_shared<models::Generator>(cfg, rng);
      const Tensor x = depth_input(rng, cfg).detach();
      auto inputs = params_of("e_dep", enc->params(), rng);
      for (auto& p : params_of("gen", gen->params(), rng)) inputs.push_back(p);
      return projected(rng, inputs, [enc, gen, x] { return gen->forward(enc->forward(x).value).value; });
    };
    t["volume_vae"] = [](Rng& rng) {
      const models::ArchConfig cfg = tiny_arch();
      const auto enc = std::make_shared<models::VolumeEncoder>(cfg, rng);
      const auto gen = std::make_shared<models::Generator>(cfg, rng);
      const Tensor t = one_hot_tensor(rng, cfg.volume_d, cfg.volume_h, cfg.volume_w, cfg.num_categories);
      const Tensor w = projection_for(rng, t.shape());
      const std::uint64_t noise_seed = rng.next_u64();
      auto inputs = params_of("e_vox", enc->params(), rng);
      for (auto& p : params_of("gen", gen->params(), rng)) inputs.push_back(p);
      return Case{[enc, gen, t, w, noise_seed] {
                    Rng noise(noise_seed);
                    const models::VaeLatent z = enc->forward(t, &noise);
                    const Tensor y = gen->forward(z.sample.value).value;
                    return ad::add(project(y, w), models::kl_divergence(z.mu, z.logvar));
                  },
                  inputs};
    };
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<std::string>& grad_check_modules() {
  static const std::vector<std::string> names = {
      "elementwise", "reductions", "clamp", "leaky_relu", "relu", "sigmoid", "reshape_slice",
      "channel_bias", "dense", "conv2d_same", "conv2d_strided", "maxpool2d", "conv3d_same",
      "conv3d_valid", "deconv3d", "weighted_bce", "gan_losses", "kl_divergence", "depth_encoder",
      "volume_encoder", "generator", "volume_discriminator", "latent_discriminator", "depth_to_volume",
      "volume_vae"};
  return names;
}

models::ArchConfig tiny_arch() {
  models::ArchConfig c;
  c.depth_width = 8;
  c.depth_height = 8;
  c.pool_pairs = 2;
  c.latent_d = 2;
  c.latent_h = 2;
  c.latent_w = 2;
  c.latent_channels = 2;
  c.deconv_layers = 2;
  c.volume_d = 8;
  c.volume_h = 8;
  c.volume_w = 8;
  c.num_categories = 3;
  c.encoder_widths = {3, 4};
  c.vox_encoder_widths = {3, 4};
  c.generator_widths = {3, 3};
  c.disc_widths = {4, 2};
  c.dense_widths = {6, 4};
  return c;
}

ad::GradCheckResult run_grad_check(const std::string& module, std::uint64_t seed,
                                   const ad::GradCheckOptions& options) {
  const auto it = builders().find(module);
  if (it == builders().end()) throw std::invalid_argument("unknown grad-check module: " + module);
  Rng rng(seed);
  const Case c = it->second(rng);
  ad::GradCheckOptions opts = options;
  opts.seed = seed;
  return ad::grad_check(c.loss, c.inputs, opts);
}

}  // namespace ssc::train
