#include "ssc/models/shape_plan.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "ssc/autodiff/ops.hpp"

namespace ssc::models {

const ad::Shape& ShapePlan::shape_of(const std::string& network, const std::string& layer) const {
  for (const PlannedLayer& l : layers) {
    if (l.network == network && l.layer == layer) return l.output;
  }
  throw std::out_of_range("no planned layer " + network + "/" + layer);
}

std::string ShapePlan::to_string() const {
  std::ostringstream out;
  for (const PlannedLayer& l : layers) {
    out << l.network << ' ' << l.layer << ' ' << ad::shape_to_string(l.output) << '\n';
  }
  if (!valid) out << "error: " << error << '\n';
  return out.str();
}

namespace {

constexpr std::array<const char*, 3> kVolumeAxes{"depth axis (D)", "height axis (H)", "width axis (W)"};

class Planner {
 public:
  explicit Planner(const ArchConfig& cfg) : cfg_(cfg) {}

  ShapePlan run() {
    try {
      check_basics();
      depth_encoder();
      generator();
      volume_encoder();
      volume_discriminator();
      latent_discriminator();
      plan_.valid = true;
    } catch (const std::invalid_argument& e) {
      plan_.valid = false;
      plan_.error = e.what();
    }
    return std::move(plan_);
  }

 private:
  [[noreturn]] void fail(const std::string& network, const std::string& layer, const std::string& msg) {
    throw std::invalid_argument(network + " " + layer + ": " + msg);
  }

  void record(const std::string& network, const std::string& layer, ad::Shape shape) {
    plan_.layers.push_back({network, layer, std::move(shape)});
  }

  void check_widths(const std::string& network, const std::vector<std::size_t>& widths,
                    std::size_t expected_count, std::size_t expected_last, const char* last_name) {
    if (widths.size() != expected_count) {
      fail(network, "widths", "expected " + std::to_string(expected_count) + " layer widths, got " +
                                  std::to_string(widths.size()));
    }
    for (std::size_t w : widths) {
      if (w == 0) fail(network, "widths", "layer width must be positive");
    }
    if (widths.back() != expected_last) {
      fail(network, "widths", "last width " + std::to_string(widths.back()) + " must equal " +
                                  last_name + " = " + std::to_string(expected_last));
    }
  }

  void check_basics() {
    const auto positive = [this](std::size_t v, const char* name) {
      if (v == 0) fail("config", name, "must be positive");
    };
    positive(cfg_.depth_width, "depth_width");
    positive(cfg_.depth_height, "depth_height");
    positive(cfg_.pool_pairs, "pool_pairs");
    positive(cfg_.latent_d, "latent_d");
    positive(cfg_.latent_h, "latent_h");
    positive(cfg_.latent_w, "latent_w");
    positive(cfg_.latent_channels, "latent_channels");
    positive(cfg_.deconv_layers, "deconv_layers");
    positive(cfg_.volume_d, "volume_d");
    positive(cfg_.volume_h, "volume_h");
    positive(cfg_.volume_w, "volume_w");
    if (cfg_.num_categories < 2 || cfg_.num_categories > 256) {
      fail("config", "num_categories", "must lie in [2, 256]");
    }
    if (!(cfg_.leaky_slope > 0.0 && cfg_.leaky_slope < 1.0)) {
      fail("config", "leaky_slope", "must lie in (0, 1)");
    }
    if (cfg_.dense_widths.empty()) fail("config", "dense_widths", "need at least one hidden layer");
    for (std::size_t w : cfg_.dense_widths) {
      if (w == 0) fail("config", "dense_widths", "layer width must be positive");
    }
  }

  void depth_encoder() {
    const std::string net = "E_dep";
    const auto widths = cfg_.resolved_encoder_widths();
    check_widths(net, widths, cfg_.pool_pairs, cfg_.encoder_final_width(), "latent_w * latent_channels");
    std::size_t h = cfg_.depth_width;
    std::size_t w = cfg_.depth_height;
    record(net, "input", {h, w, 2});
    for (std::size_t i = 0; i < cfg_.pool_pairs; ++i) {
      const std::string pair = "pair" + std::to_string(i);
      h = ad::conv_output_extent(h, 3, 1, ad::Padding::kSame);
      w = ad::conv_output_extent(w, 3, 1, ad::Padding::kSame);
      record(net, pair + ".conv", {h, w, widths[i]});
      if (h < 2 || w < 2) {
        fail(net, pair + ".pool", "input " + std::to_string(h) + "x" + std::to_string(w) +
                                      " is too small for 2x2 pooling");
      }
      h = ad::pool_output_extent(h);
      w = ad::pool_output_extent(w);
      record(net, pair + ".pool", {h, w, widths[i]});
    }
    if (h != cfg_.latent_d) {
      fail(net, "output", "image first axis pools to " + std::to_string(h) + " but latent depth axis d = " +
                              std::to_string(cfg_.latent_d));
    }
    if (w != cfg_.latent_h) {
      fail(net, "output", "image second axis pools to " + std::to_string(w) +
                              " but latent height axis h = " + std::to_string(cfg_.latent_h));
    }
    record(net, "reshape", latent_shape(cfg_.latent_channels));
  }

  ad::Shape latent_shape(std::size_t channels) const {
    return {cfg_.latent_d, cfg_.latent_h, cfg_.latent_w, channels};
  }

  void generator() {
    const std::string net = "G";
    const auto widths = cfg_.resolved_generator_widths();
    check_widths(net, widths, cfg_.deconv_layers, cfg_.num_categories, "num_categories");
    std::array<std::size_t, 3> e{cfg_.latent_d, cfg_.latent_h, cfg_.latent_w};
    record(net, "input", latent_shape(cfg_.latent_channels));
    for (std::size_t i = 0; i < cfg_.deconv_layers; ++i) {
      for (auto& x : e) x *= 2;
      record(net, "deconv" + std::to_string(i), {e[0], e[1], e[2], widths[i]});
    }
    const std::array<std::size_t, 3> vol{cfg_.volume_d, cfg_.volume_h, cfg_.volume_w};
    for (int a = 0; a < 3; ++a) {
      if (e[a] != vol[a]) {
        fail(net, "deconv" + std::to_string(cfg_.deconv_layers - 1),
             std::string(kVolumeAxes[a]) + " extent " + std::to_string(e[a]) +
                 " does not match volume extent " + std::to_string(vol[a]));
      }
    }
  }

  // Stride-2 same-padded conv stack from the volume down to the latent grid.
  void conv_stack(const std::string& net, const std::vector<std::size_t>& widths) {
    std::array<std::size_t, 3> e{cfg_.volume_d, cfg_.volume_h, cfg_.volume_w};
    record(net, "input", {e[0], e[1], e[2], cfg_.num_categories});
    for (std::size_t i = 0; i < widths.size(); ++i) {
      for (auto& x : e) x = ad::conv_output_extent(x, 3, 2, ad::Padding::kSame);
      record(net, "conv" + std::to_string(i), {e[0], e[1], e[2], widths[i]});
    }
    const std::array<std::size_t, 3> lat{cfg_.latent_d, cfg_.latent_h, cfg_.latent_w};
    for (int a = 0; a < 3; ++a) {
      if (e[a] != lat[a]) {
        fail(net, "conv" + std::to_string(widths.size() - 1),
             std::string(kVolumeAxes[a]) + " extent " + std::to_string(e[a]) +
                 " does not match latent extent " + std::to_string(lat[a]));
      }
    }
  }

  void volume_encoder() {
    const std::string net = "E_vox";
    const auto widths = cfg_.resolved_vox_encoder_widths();
    check_widths(net, widths, cfg_.deconv_layers, 2 * cfg_.latent_channels, "2 * latent_channels");
    conv_stack(net, widths);
    record(net, "mu", latent_shape(cfg_.latent_channels));
    record(net, "logvar", latent_shape(cfg_.latent_channels));
  }

  void dense_head(const std::string& net) {
    for (std::size_t i = 0; i < cfg_.dense_widths.size(); ++i) {
      record(net, "dense" + std::to_string(i), {cfg_.dense_widths[i]});
    }
    record(net, "dense" + std::to_string(cfg_.dense_widths.size()), {1});
  }

  void volume_discriminator() {
    const std::string net = "D_vox";
    const auto widths = cfg_.resolved_disc_widths();
    check_widths(net, widths, cfg_.deconv_layers, cfg_.latent_channels, "latent_channels");
    conv_stack(net, widths);
    record(net, "flatten", {cfg_.latent_size()});
    dense_head(net);
  }

  void latent_discriminator() {
    const std::string net = "D_l";
    record(net, "input", latent_shape(cfg_.latent_channels));
    record(net, "flatten", {cfg_.latent_size()});
    dense_head(net);
  }

  const ArchConfig& cfg_;
  ShapePlan plan_;
};

}  // namespace

ShapePlan validate_config(const ArchConfig& cfg) { return Planner(cfg).run(); }

}  // namespace ssc::models
