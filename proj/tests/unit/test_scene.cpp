#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "ssc/errors.hpp"
#include "ssc/rng.hpp"
#include "ssc/scene/dataset.hpp"
#include "ssc/scene/generator.hpp"
#include "ssc/scene/kfold.hpp"
#include "ssc/scene/render.hpp"
#include "ssc/scene/transforms.hpp"
#include "ssc/scene/vsem.hpp"

namespace {

using namespace ssc;
using namespace ssc::scene;

TEST(Volume, OneHotHasSingleOnePerVoxel) {
  SemanticVolume v({2, 3, 4});
  v.set(1, 2, 3, kChair);
  const ad::Tensor t = v.one_hot();
  EXPECT_EQ(t.shape(), (ad::Shape{2, 3, 4, 12}));
  double total = 0.0;
  for (double x : t.values()) total += x;
  EXPECT_EQ(total, 24.0);
  EXPECT_EQ(t.at(v.index(1, 2, 3) * 12 + kChair), 1.0);
  EXPECT_THROW(v.set(0, 0, 0, 12), std::out_of_range);
}

TEST(Volume, CategoryNames) {
  EXPECT_EQ(default_category_names().size(), 12u);
  EXPECT_EQ(default_category_names()[0], "empty");
  EXPECT_EQ(category_names_for(3)[2], "c2");
}

TEST(Generator, DeterministicPerSeed) {
  EXPECT_EQ(generate_scene(4), generate_scene(4));
  EXPECT_NE(generate_scene(4), generate_scene(5));
}

TEST(Generator, MostlyEmptyWithFullFloor) {
  const SemanticVolume v = generate_scene(11);
  const auto counts = v.category_counts();
  EXPECT_GT(counts[kEmpty], v.extents().count() / 2);
  for (std::size_t d = 0; d < v.extents().d; ++d) {
    for (std::size_t w = 0; w < v.extents().w; ++w) EXPECT_NE(v.at(d, 0, w), kEmpty);
  }
  for (std::uint8_t l : v.labels()) EXPECT_LT(l, 12);
  EXPECT_GT(counts[kWall], 0u);
  EXPECT_GT(counts[kCeiling], 0u);
  EXPECT_GT(counts[kDoor], 0u);
  EXPECT_GT(counts[kWindow], 0u);
}

TEST(Generator, RejectsTinyOrOvercrowded) {
  SceneConfig tiny;
  tiny.extents = {7, 8, 8};
  EXPECT_THROW(generate_scene(1, tiny), std::invalid_argument);
  SceneConfig crowded;
  crowded.extents = {8, 8, 8};
  crowded.beds = 40;
  crowded.max_attempts = 20;
  EXPECT_THROW(generate_scene(1, crowded), PlacementError);
}

TEST(Render, WallGivesConstantDepth) {
  const Extents3 e{16, 12, 20};
  SemanticVolume v(e);
  for (std::size_t d = 0; d < e.d; ++d)
    for (std::size_t h = 0; h < e.h; ++h) v.set(d, h, 7, kWall);
  const CameraModel cam = CameraModel::pinhole(e, 8, 6, 60.0, 0.05);
  const DepthImage img = render_depth(v, cam);
  ASSERT_EQ(img.valid_count(), 48u);
  for (float z : img.data()) EXPECT_NEAR(z, 7 * 0.05, 1e-6);
}

TEST(Render, EmptyVolumeAllInvalid) {
  const Extents3 e{8, 8, 8};
  EXPECT_EQ(render_depth(SemanticVolume(e), CameraModel::pinhole(e, 6, 4)).valid_count(), 0u);
}

TEST(Render, OccludedObjectInvisible) {
  const Extents3 e{8, 8, 16};
  SemanticVolume v(e);
  for (std::size_t d = 0; d < 8; ++d)
    for (std::size_t h = 0; h < 8; ++h) v.set(d, h, 4, kWall);
  v.set(4, 4, 10, kChair);
  const CameraModel cam = CameraModel::orthographic_view(e, 8, 8, 1.0);
  const DepthImage with_chair = render_depth(v, cam);
  v.set(4, 4, 10, kEmpty);
  EXPECT_TRUE(with_chair.bitwise_equal(render_depth(v, cam)));
}

TEST(Render, DepthNeverBelowNearestOccupied) {
  const SemanticVolume v = generate_scene(3, [] {
    SceneConfig c;
    c.extents = {30, 18, 30};
    return c;
  }());
  const CameraModel cam = CameraModel::pinhole(v.extents(), 20, 15, 60.0, 0.02, 1.5);
  double nearest = 1e9;
  for (std::size_t d = 0; d < 30; ++d)
    for (std::size_t h = 0; h < 18; ++h)
      for (std::size_t w = 0; w < 30; ++w) {
        if (v.at(d, h, w) == kEmpty) continue;
        const double z = std::max(0.0, static_cast<double>(w) - cam.origin[2]);
        nearest = std::min(nearest, z * cam.voxel_size);
      }
  const DepthImage img = render_depth(v, cam);
  for (float z : img.data()) {
    if (!std::isnan(z)) {
      EXPECT_GE(z, nearest - 1e-6);
    }
  }
}

TEST(Resize, ShapeConstantAndAverage) {
  DepthImage big(640, 480, std::vector<float>(640 * 480, 2.0f));
  const DepthImage small = resize_depth(big, 320, 240);
  EXPECT_EQ(small.width(), 320u);
  EXPECT_EQ(small.height(), 240u);
  for (float z : small.data()) EXPECT_EQ(z, 2.0f);

  DepthImage quad(2, 2);
  quad.set(0, 0, 1.0f);
  quad.set(0, 1, 2.0f);
  quad.set(1, 0, 3.0f);
  quad.set(1, 1, 4.0f);
  EXPECT_FLOAT_EQ(resize_depth(quad, 1, 1).at(0, 0), 2.5f);
  EXPECT_THROW(resize_depth(quad, 3, 1), std::invalid_argument);
}

TEST(Resize, InvalidSupportsRenormalizeOrPropagate) {
  DepthImage quad(2, 2);
  quad.set(0, 0, 1.0f);
  quad.set(1, 1, 3.0f);
  EXPECT_FLOAT_EQ(resize_depth(quad, 1, 1).at(0, 0), 2.0f);
  EXPECT_FALSE(resize_depth(DepthImage(2, 2), 1, 1).valid(0, 0));
}

TEST(Downsample, ExtentsAndRules) {
  EXPECT_EQ(downsample_volume(SemanticVolume({240, 144, 240})).extents(), (Extents3{80, 48, 80}));

  SemanticVolume uniform({3, 3, 3}, std::vector<std::uint8_t>(27, kSofa));
  EXPECT_EQ(downsample_volume(uniform).at(0, 0, 0), kSofa);

  std::vector<std::uint8_t> mixed(27, kEmpty);
  std::fill(mixed.begin(), mixed.begin() + 13, kWall);
  EXPECT_EQ(downsample_volume(SemanticVolume({3, 3, 3}, mixed)).at(0, 0, 0), kWall);

  std::vector<std::uint8_t> tie(27, kEmpty);
  tie[0] = kTable;
  tie[1] = kChair;
  EXPECT_EQ(downsample_volume(SemanticVolume({3, 3, 3}, tie)).at(0, 0, 0), kChair);
}

TEST(Downsample, PadsAndNeverInventsCategories) {
  const SemanticVolume v = generate_scene(8, [] {
    SceneConfig c;
    c.extents = {31, 20, 29};
    return c;
  }());
  const SemanticVolume out = downsample_volume(v);
  EXPECT_EQ(out.extents(), (Extents3{11, 7, 10}));
  const auto in_counts = v.category_counts();
  const auto out_counts = out.category_counts();
  for (std::size_t c = 1; c < 12; ++c) EXPECT_LE(out_counts[c], in_counts[c]) << c;
}

TEST(Remap, IdentityManyToOneAndTotality) {
  const SemanticVolume v = generate_scene(2);
  std::map<std::size_t, std::size_t> id;
  for (std::size_t c = 0; c < 12; ++c) id[c] = c;
  EXPECT_EQ(remap_labels(v, id, default_category_names()), v);

  std::map<std::size_t, std::size_t> coarse;
  for (std::size_t c = 0; c < 12; ++c) coarse[c] = c == 0 ? 0 : (c < 4 ? 1 : 2);
  const SemanticVolume r = remap_labels(v, coarse, {"empty", "structure", "object"});
  EXPECT_EQ(r.num_categories(), 3u);
  const auto src = v.category_counts();
  const auto dst = r.category_counts();
  EXPECT_EQ(dst[1], src[1] + src[2] + src[3]);
  std::size_t objects = 0;
  for (std::size_t c = 4; c < 12; ++c) objects += src[c];
  EXPECT_EQ(dst[2], objects);

  coarse.erase(7);
  EXPECT_THROW(remap_labels(v, coarse, {"empty", "structure", "object"}), std::invalid_argument);
}

void expect_partition(std::size_t n, std::size_t k, std::uint64_t seed) {
  const auto folds = kfold_split(n, k, seed);
  ASSERT_EQ(folds.size(), k);
  std::vector<int> seen(n, 0);
  std::size_t lo = n, hi = 0;
  for (const Fold& f : folds) {
    lo = std::min(lo, f.test.size());
    hi = std::max(hi, f.test.size());
    for (std::size_t i : f.test) ++seen[i];
    EXPECT_EQ(f.train.size() + f.test.size(), n);
    std::set<std::size_t> tr(f.train.begin(), f.train.end());
    for (std::size_t i : f.test) EXPECT_EQ(tr.count(i), 0u);
  }
  EXPECT_LE(hi - lo, 1u);
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(KFold, Examples) {
  for (const Fold& f : kfold_split(10, 10, 3)) EXPECT_EQ(f.test.size(), 1u);
  std::size_t elevens = 0;
  for (const Fold& f : kfold_split(103, 10, 3)) elevens += f.test.size() == 11;
  EXPECT_EQ(elevens, 3u);
  EXPECT_THROW(kfold_split(3, 4, 1), std::invalid_argument);
  EXPECT_THROW(kfold_split(3, 1, 1), std::invalid_argument);
}

TEST(KFold, PartitionProperty) {
  Rng rng(77);
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 2 + rng.below(9);
    const std::size_t n = k + rng.below(60);
    expect_partition(n, k, rng.next_u64());
  }
}

TEST(KFold, DeterministicPerSeed) {
  const auto a = kfold_split(20, 4, 9);
  const auto b = kfold_split(20, 4, 9);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a[i].test, b[i].test);
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("ssc_scene_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

using Vsem = TempDir;

TEST_F(Vsem, DepthAndVolumeRoundTripBitwise) {
  SyntheticConfig sc;
  sc.count = 1;
  sc.volume_extents = {12, 8, 12};
  sc.depth_width = 16;
  sc.depth_height = 12;
  const Sample s = make_synthetic_sample(5, sc);
  EXPECT_GT(s.depth.valid_count(), 0u);
  EXPECT_LT(s.depth.valid_count(), s.depth.pixel_count() + 1);
  save_sample(dir_ / "a", s);
  const Sample back = load_sample(dir_ / "a");
  EXPECT_TRUE(back.depth.bitwise_equal(s.depth));
  EXPECT_EQ(back.volume, s.volume);
  EXPECT_EQ(read_file(dir_ / "a.depth.vsem"), encode_depth(back.depth));
}

TEST_F(Vsem, CorruptionIsReported) {
  SemanticVolume v({4, 4, 4});
  v.set(1, 1, 1, kBed);
  std::vector<std::uint8_t> bytes = encode_volume(v);
  EXPECT_EQ(bytes.size(), 4 + 2 + 1 + 1 + 12 + 1 + 64u);

  auto kind_of = [](std::span<const std::uint8_t> b) {
    try {
      decode_volume(b);
    } catch (const FormatError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error";
    return FormatError::Kind::kIo;
  };
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kBadMagic);
  bad = bytes;
  bad[4] = 2;
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kBadVersion);
  bad = bytes;
  bad.pop_back();
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kTruncated);
  bad = bytes;
  bad.push_back(0);
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kTruncated);
  bad = bytes;
  bad[6] = 0;  // depth kind
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kBadHeader);
  bad = bytes;
  for (int i = 8; i < 20; ++i) bad[i] = 0xff;
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kExtentOverflow);
  bad = bytes;
  bad.back() = 200;
  EXPECT_EQ(kind_of(bad), FormatError::Kind::kBadHeader);
  EXPECT_THROW(load_volume(dir_ / "missing.vsem"), FormatError);
}

using DatasetIo = TempDir;

TEST_F(DatasetIo, SyntheticDatasetRoundTrip) {
  SyntheticConfig sc;
  sc.count = 3;
  sc.seed = 4;
  sc.volume_extents = {12, 8, 12};
  sc.depth_width = 16;
  sc.depth_height = 12;
  const Dataset d = make_synthetic_dataset(sc);
  d.validate();
  save_dataset(dir_, d);
  const Dataset back = load_dataset(dir_);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.samples[i].volume, d.samples[i].volume);
    EXPECT_TRUE(back.samples[i].depth.bitwise_equal(d.samples[i].depth));
  }
  EXPECT_EQ(back.provenance, d.provenance);
  const Dataset again = make_synthetic_dataset(sc);
  EXPECT_EQ(again.samples[2].volume, d.samples[2].volume);
}

TEST(DatasetValidate, MismatchedExtentsRejected) {
  Dataset d;
  d.samples.push_back({DepthImage(4, 3), SemanticVolume({2, 2, 2})});
  d.samples.push_back({DepthImage(4, 3), SemanticVolume({2, 2, 4})});
  EXPECT_THROW(d.validate(), ShapeError);
}

}  // namespace
