#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "ssc/errors.hpp"
#include "ssc/models/checkpoint.hpp"
#include "ssc/models/networks.hpp"
#include "ssc/models/shape_plan.hpp"
#include "ssc/rng.hpp"
#include "ssc/scene/generator.hpp"

namespace {

using namespace ssc;
using namespace ssc::models;
using ad::Shape;

void zero_rank1(ad::ParamSet& p) {
  for (auto& e : p.entries()) {
    if (e.value.rank() == 1) {
      for (double& v : e.value.mutable_values()) v = 0.0;
    }
  }
}

ArchConfig small_arch() {
  ArchConfig a = ArchConfig::desk();
  a.dense_widths = {16, 8};
  return a;
}

scene::SemanticVolume random_volume(const ArchConfig& a, std::uint64_t seed) {
  Rng rng(seed);
  scene::SemanticVolume v({a.volume_d, a.volume_h, a.volume_w}, a.num_categories);
  for (std::size_t d = 0; d < a.volume_d; ++d)
    for (std::size_t h = 0; h < a.volume_h; ++h)
      for (std::size_t w = 0; w < a.volume_w; ++w)
        v.set(d, h, w, static_cast<std::uint8_t>(rng.below(a.num_categories)));
  return v;
}

TEST(ShapePlan, PaperConfiguration) {
  const ShapePlan plan = validate_config(ArchConfig::paper());
  ASSERT_TRUE(plan.valid) << plan.error;
  EXPECT_EQ(plan.shape_of("E_dep", "input"), (Shape{320, 240, 2}));
  EXPECT_EQ(plan.shape_of("E_dep", "pair5.pool"), (Shape{5, 3, 80}));
  EXPECT_EQ(plan.shape_of("E_dep", "reshape"), (Shape{5, 3, 5, 16}));
  EXPECT_EQ(plan.shape_of("G", "deconv3"), (Shape{80, 48, 80, 12}));
  EXPECT_EQ(plan.shape_of("E_vox", "mu"), (Shape{5, 3, 5, 16}));
  EXPECT_EQ(plan.shape_of("D_vox", "flatten"), (Shape{1200}));
  EXPECT_EQ(plan.shape_of("D_l", "flatten"), (Shape{1200}));
  EXPECT_EQ(plan.shape_of("D_l", "dense2"), (Shape{1}));
  EXPECT_THROW(plan.shape_of("G", "deconv9"), std::out_of_range);
  EXPECT_NE(plan.to_string().find("pair5.pool"), std::string::npos);
}

TEST(ShapePlan, DeskConfigurationValid) {
  const ShapePlan plan = validate_config(ArchConfig::desk());
  ASSERT_TRUE(plan.valid) << plan.error;
  EXPECT_EQ(plan.shape_of("E_dep", "pair3.pool"), (Shape{5, 3, 40}));
  EXPECT_EQ(plan.shape_of("G", "deconv1"), (Shape{20, 12, 20, 12}));
}

TEST(ShapePlan, MismatchedVolumeNamesDepthAxis) {
  ArchConfig a = ArchConfig::paper();
  a.volume_d = 64;
  const ShapePlan plan = validate_config(a);
  EXPECT_FALSE(plan.valid);
  EXPECT_NE(plan.error.find("depth axis"), std::string::npos) << plan.error;
  EXPECT_NE(plan.error.find("G"), std::string::npos);
}

TEST(ShapePlan, BadWidthsAndPoolingReported) {
  ArchConfig a = ArchConfig::desk();
  a.generator_widths = {16, 11};
  EXPECT_FALSE(validate_config(a).valid);
  a = ArchConfig::desk();
  a.pool_pairs = 3;
  const ShapePlan p = validate_config(a);
  EXPECT_FALSE(p.valid);
  EXPECT_NE(p.error.find("E_dep"), std::string::npos) << p.error;
  a = ArchConfig::desk();
  a.leaky_slope = 1.0;
  EXPECT_FALSE(validate_config(a).valid);
}

TEST(ShapePlan, AllocatesNoTensors) {
  const std::size_t before = ad::detail::created_node_count();
  const ShapePlan plan = validate_config(ArchConfig::paper());
  EXPECT_TRUE(plan.valid);
  EXPECT_EQ(ad::detail::created_node_count(), before);
}

TEST(Networks, InvalidConfigRejected) {
  ArchConfig a = ArchConfig::desk();
  a.volume_w = 24;
  EXPECT_THROW(Networks::create(a, 1), ConfigError);
}

TEST(Networks, DeskShapesAndRanges) {
  const ArchConfig a = small_arch();
  Networks nets = Networks::create(a, 3);
  scene::DepthImage x(a.depth_width, a.depth_height);
  Rng rng(1);
  for (std::size_t u = 0; u < x.width(); ++u)
    for (std::size_t v = 0; v < x.height(); ++v)
      if (rng.uniform() < 0.9) x.set(u, v, static_cast<float>(rng.uniform(0.5, 4.0)));
  const LatentCode ld = encode_depth(x, nets.e_dep);
  EXPECT_EQ(ld.value.shape(), (Shape{5, 3, 5, 8}));
  EXPECT_EQ(ld.origin, LatentOrigin::kFromDepth);

  const VaeLatent lv = encode_volume(random_volume(a, 2), nets.e_vox, nullptr);
  EXPECT_EQ(lv.mu.shape(), ld.value.shape());
  EXPECT_EQ(lv.sample.origin, LatentOrigin::kFromVolume);

  const ProbVolume y1 = generate(ld, nets.gen);
  const ProbVolume y2 = generate(lv.sample, nets.gen);
  EXPECT_EQ(y1.value.shape(), (Shape{20, 12, 20, 12}));
  EXPECT_EQ(y1.value.shape(), y2.value.shape());
  for (double q : y1.value.values()) {
    EXPECT_GT(q, 0.0);
    EXPECT_LT(q, 1.0);
  }
  const double dv = disc_vox(y1.value, nets.d_vox).item();
  const double dl = disc_lat(ld, nets.d_lat).item();
  EXPECT_GT(dv, 0.0);
  EXPECT_LT(dv, 1.0);
  EXPECT_GT(dl, 0.0);
  EXPECT_LT(dl, 1.0);
  EXPECT_EQ(disc_vox(y1.value, nets.d_vox).item(), dv);
}

TEST(Networks, SameSeedSameParameters) {
  const Networks a = Networks::create(small_arch(), 9);
  const Networks b = Networks::create(small_arch(), 9);
  const Networks c = Networks::create(small_arch(), 10);
  EXPECT_TRUE(a.gen.params().values_equal(b.gen.params()));
  EXPECT_TRUE(a.d_lat.params().values_equal(b.d_lat.params()));
  EXPECT_FALSE(a.gen.params().values_equal(c.gen.params()));
}

TEST(Networks, ZeroInputsZeroBiases) {
  const ArchConfig a = small_arch();
  Networks nets = Networks::create(a, 4);
  zero_rank1(nets.e_dep.params());
  zero_rank1(nets.gen.params());
  const LatentCode l = nets.e_dep.forward(ad::Tensor::zeros({a.depth_width, a.depth_height, 2}));
  for (double v : l.value.values()) EXPECT_EQ(v, 0.0);
  const ProbVolume y = nets.gen.forward(l.value);
  for (double q : y.value.values()) EXPECT_EQ(q, 0.5);
}

TEST(Networks, ZeroWeightsLatentDiscriminatorIsHalf) {
  const ArchConfig a = small_arch();
  Networks nets = Networks::create(a, 4);
  for (auto& e : nets.d_lat.params().entries())
    for (double& v : e.value.mutable_values()) v = 0.0;
  Rng rng(3);
  std::vector<double> z(a.latent_size());
  for (double& v : z) v = rng.normal();
  EXPECT_EQ(nets.d_lat.forward(ad::Tensor::from_values({5, 3, 5, 8}, z)).item(), 0.5);
}

TEST(Networks, ReparameterizationAndOneHotCheck) {
  const ArchConfig a = small_arch();
  Networks nets = Networks::create(a, 5);
  const auto t = random_volume(a, 6);
  const VaeLatent plain = encode_volume(t, nets.e_vox, nullptr);
  for (std::size_t i = 0; i < plain.mu.numel(); ++i) EXPECT_EQ(plain.sample.value.at(i), plain.mu.at(i));
  Rng noise(8);
  const VaeLatent noisy = encode_volume(t, nets.e_vox, &noise);
  EXPECT_EQ(noisy.mu.at(0), plain.mu.at(0));
  EXPECT_NE(noisy.sample.value.at(0), noisy.mu.at(0));

  ad::Tensor bad = t.one_hot();
  bad.mutable_values()[0] = 0.5;
  EXPECT_THROW(encode_volume(bad, nets.e_vox, nullptr), std::invalid_argument);
}

TEST(Networks, WrongInputShapeRejected) {
  Networks nets = Networks::create(small_arch(), 1);
  EXPECT_THROW(encode_depth(scene::DepthImage(60, 80), nets.e_dep), ShapeError);
  EXPECT_THROW(nets.gen.forward(ad::Tensor::zeros({5, 3, 5, 4})), ShapeError);
}

TEST(Kl, KnownValues) {
  EXPECT_EQ(kl_divergence(ad::Tensor::zeros({4}), ad::Tensor::zeros({4})).item(), 0.0);
  EXPECT_NEAR(kl_divergence(ad::Tensor::full({1}, 1.0), ad::Tensor::zeros({1})).item(), 0.5, 1e-15);
  const double lv = 0.7;
  EXPECT_NEAR(kl_divergence(ad::Tensor::zeros({1}), ad::Tensor::full({1}, lv)).item(),
              0.5 * (std::exp(lv) - 1.0 - lv), 1e-15);
}

TEST(ArchText, CanonicalRoundTrip) {
  ArchConfig a = ArchConfig::desk();
  a.generator_widths = {64, 12};
  a.leaky_slope = 0.15;
  std::string text;
  write_canonical(text, a);
  KeyValues kv = KeyValues::parse(text);
  ArchConfig b = ArchConfig::paper();
  read_keys(kv, b);
  kv.expect_empty();
  EXPECT_EQ(a, b);
}

class CheckpointFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = std::filesystem::temp_directory_path() / "ssc_models_ckpt.vsem";
  }
  void TearDown() override { std::filesystem::remove(path_); }
  std::filesystem::path path_;
};

TEST_F(CheckpointFiles, NetworksRoundTripBitwise) {
  const ArchConfig a = small_arch();
  Networks nets = Networks::create(a, 12);
  nets.gen.params().entries()[0].first_moment.assign(nets.gen.params().entries()[0].value.numel(), 0.25);
  nets.gen.params().set_adam_steps(17);
  Checkpoint ck;
  ck.config_text = "arch.pool_pairs = 4\n";
  store_networks(ck, nets);
  save_checkpoint(path_, ck);
  const Checkpoint back = load_checkpoint(path_);
  EXPECT_EQ(back, ck);

  Networks other = Networks::create(a, 99);
  restore_networks(back, other);
  EXPECT_TRUE(other.e_dep.params().values_equal(nets.e_dep.params()));
  EXPECT_TRUE(other.d_vox.params().values_equal(nets.d_vox.params()));
  EXPECT_EQ(other.gen.params().adam_steps(), 17u);
  EXPECT_EQ(other.gen.params().entries()[0].first_moment, nets.gen.params().entries()[0].first_moment);
  EXPECT_EQ(encode_checkpoint(back), encode_checkpoint(ck));
}

TEST(CheckpointCodec, CorruptionKinds) {
  Checkpoint ck;
  ck.config_text = "x = 1\n";
  ck.tensors.push_back({"a", {2, 3}, {1, 2, 3, 4, 5, 6}});
  ck.tensors.push_back({"b", {}, {std::nan("")}});
  const auto bytes = encode_checkpoint(ck);
  const Checkpoint back = decode_checkpoint(bytes);
  ASSERT_EQ(back.tensors.size(), 2u);
  EXPECT_TRUE(std::isnan(back.tensors[1].values[0]));
  EXPECT_EQ(encode_checkpoint(back), bytes);

  auto kind_of = [](std::vector<std::uint8_t> b) {
    try {
      decode_checkpoint(b);
    } catch (const FormatError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error";
    return FormatError::Kind::kIo;
  };
  auto bad = bytes;
  bad[1] = 'x';
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kBadMagic);
  bad = bytes;
  bad.resize(bad.size() - 3);
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kTruncated);
  bad = bytes;
  bad.push_back(1);
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kTruncated);
  bad = bytes;
  bad[6] = 1;
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kBadHeader);
}

TEST(CheckpointCodec, RequireChecksShape) {
  Checkpoint ck;
  ck.tensors.push_back({"w", {2}, {1, 2}});
  EXPECT_NO_THROW(ck.require("w", {2}));
  EXPECT_THROW(ck.require("w", {3}), FormatError);
  EXPECT_THROW(ck.require("missing", {2}), FormatError);
  EXPECT_EQ(ck.find("missing"), nullptr);
}

TEST(CheckpointCodec, MismatchedNetworksRejected) {
  Networks nets = Networks::create(small_arch(), 1);
  Checkpoint ck;
  store_networks(ck, nets);
  ArchConfig wider = small_arch();
  wider.generator_widths = {32, 12};
  Networks other = Networks::create(wider, 1);
  EXPECT_THROW(restore_networks(ck, other), FormatError);
}

}  // namespace
