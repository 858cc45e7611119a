#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "ssc/errors.hpp"
#include "ssc/eval/export.hpp"
#include "ssc/eval/metrics.hpp"
#include "ssc/eval/report.hpp"
#include "ssc/rng.hpp"

namespace {

using namespace ssc;
using namespace ssc::eval;
using scene::SemanticVolume;

models::ProbVolume probs(scene::Extents3 e, std::size_t nc, std::vector<double> v) {
  return {ad::Tensor::from_values({e.d, e.h, e.w, nc}, std::move(v))};
}

TEST(Argmax, DirectAndTies) {
  const auto y = probs({1, 1, 2}, 3, {0.1, 0.7, 0.2, 0.4, 0.4, 0.4});
  const SemanticVolume l = argmax_labels(y);
  EXPECT_EQ(l.at(0, 0, 0), 1);
  EXPECT_EQ(l.at(0, 0, 1), 0);
  EXPECT_EQ(l.num_categories(), 3u);
}

TEST(Iou, HandExample) {
  SemanticVolume gt({1, 1, 4}, 2), pred({1, 1, 4}, 2);
  gt.set(0, 0, 0, 1);
  gt.set(0, 0, 1, 1);
  gt.set(0, 0, 2, 1);
  pred.set(0, 0, 2, 1);
  pred.set(0, 0, 3, 1);
  const CategoryScores s = iou(pred, gt);
  EXPECT_EQ(*s.score[1], 0.25);
  EXPECT_EQ(*s.score[0], 0.0);  // pred {0,1} vs gt {3}
  EXPECT_EQ(s.gt_count[1], 3u);
  EXPECT_EQ(s.weighted_average, (3 * 0.25 + 1 * 0.0) / 4);
}

TEST(Iou, PerfectAndAbsentCategories) {
  SemanticVolume gt({2, 2, 2}, 4);
  gt.set(1, 1, 1, 2);
  const CategoryScores s = iou(gt, gt);
  EXPECT_EQ(*s.score[0], 1.0);
  EXPECT_EQ(*s.score[2], 1.0);
  EXPECT_FALSE(s.score[1].has_value());
  EXPECT_EQ(s.weighted_average, 1.0);
  EXPECT_THROW(iou(gt, SemanticVolume({2, 2, 1}, 4)), ShapeError);
}

TEST(Ap, RankingExamples) {
  EXPECT_DOUBLE_EQ(*average_precision({true, false, true}), (1.0 + 2.0 / 3.0) / 2.0);
  EXPECT_EQ(*average_precision({true, true, false}), 1.0);
  EXPECT_FALSE(average_precision({false, false}).has_value());
}

TEST(Ap, TiesKeepScanOrder) {
  SemanticVolume gt({1, 1, 3}, 2);
  gt.set(0, 0, 2, 1);
  const auto y = probs({1, 1, 3}, 2, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
  const CategoryScores s = mean_ap(y, gt);
  EXPECT_DOUBLE_EQ(*s.score[1], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*s.score[0], 1.0);
}

TEST(Ap, AccumulatorPoolsRankings) {
  Rng rng(4);
  SemanticVolume a({2, 2, 2}, 3), b({2, 2, 2}, 3);
  std::vector<double> pa(24), pb(24);
  for (double& v : pa) v = rng.uniform();
  for (double& v : pb) v = rng.uniform();
  a.set(0, 0, 1, 2);
  b.set(1, 1, 0, 2);
  b.set(1, 0, 0, 1);
  ApAccumulator acc(3);
  acc.add(probs({2, 2, 2}, 3, pa), a);
  acc.add(probs({2, 2, 2}, 3, pb), b);
  const CategoryScores pooled = acc.result();

  // Concatenating the two volumes along d gives the same pooled ranking.
  std::vector<std::uint8_t> labels(a.labels().begin(), a.labels().end());
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  std::vector<double> p = pa;
  p.insert(p.end(), pb.begin(), pb.end());
  const CategoryScores joined = mean_ap(probs({4, 2, 2}, 3, p), SemanticVolume({4, 2, 2}, labels, 3));
  EXPECT_EQ(pooled.score, joined.score);
  EXPECT_EQ(pooled.weighted_average, joined.weighted_average);
}

TEST(WeightedAverage, SkipsMissingScores) {
  EXPECT_EQ(weighted_average({0.5, std::nullopt, 1.0}, {2, 5, 2}), 0.75);
  EXPECT_EQ(weighted_average({std::nullopt}, {3}), 0.0);
}

EvalReport sample_report() {
  EvalReport r;
  r.category_names = {"empty", "wall", "bed"};
  r.iou = {0.9, 0.25, std::nullopt};
  r.ap = {0.95, 0.5, std::nullopt};
  r.voxel_counts = {30, 10, 0};
  r.weighted_iou = weighted_average(r.iou, r.voxel_counts);
  r.weighted_map = weighted_average(r.ap, r.voxel_counts);
  r.sample_count = 2;
  r.config_fingerprint = "0123456789abcdef";
  return r;
}

TEST(Report, JsonRoundTripIsExact) {
  EvalReport r = sample_report();
  r.iou[0] = 0.1 + 0.2;
  r.weighted_iou = weighted_average(r.iou, r.voxel_counts);
  EXPECT_TRUE(weighted_identity_holds(r));
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
  EXPECT_THROW(report_from_json("{not json"), FormatError);
  EXPECT_THROW(report_from_json("{}"), FormatError);
}

TEST(Report, IdentityDetectsTampering) {
  EvalReport r = sample_report();
  r.weighted_iou += 1e-3;
  EXPECT_FALSE(weighted_identity_holds(r));
  r = sample_report();
  r.iou[1] = 1.5;
  r.weighted_iou = weighted_average(r.iou, r.voxel_counts);
  EXPECT_FALSE(weighted_identity_holds(r));
}

TEST(Report, MeanAcrossFolds) {
  EvalReport a = sample_report();
  EvalReport b = sample_report();
  b.iou = {0.7, std::nullopt, 0.5};
  b.voxel_counts = {20, 0, 4};
  b.weighted_iou = weighted_average(b.iou, b.voxel_counts);
  b.weighted_map = weighted_average(b.ap, b.voxel_counts);
  const EvalReport m = mean_report({a, b});
  EXPECT_DOUBLE_EQ(*m.iou[0], 0.8);
  EXPECT_EQ(*m.iou[1], 0.25);
  EXPECT_EQ(*m.iou[2], 0.5);
  EXPECT_EQ(m.voxel_counts, (std::vector<std::uint64_t>{50, 10, 4}));
  EXPECT_EQ(m.sample_count, 4u);
  EXPECT_TRUE(weighted_identity_holds(m));
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
  std::size_t n = 0, pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    if (text.compare(pos, prefix.size(), prefix) == 0) ++n;
    pos = end + 1;
  }
  return n;
}

TEST(Export, EmptyAndSingleVoxel) {
  SemanticVolume v({3, 3, 3});
  EXPECT_EQ(count_lines(geometry_obj(v), "f "), 0u);
  v.set(1, 0, 2, scene::kWall);
  const std::string obj = geometry_obj(v);
  EXPECT_EQ(count_lines(obj, "v "), 8u);
  EXPECT_EQ(count_lines(obj, "f "), 12u);
  EXPECT_EQ(count_lines(obj, "g wall"), 1u);
  EXPECT_EQ(count_lines(obj, "g "), 1u);
}

TEST(Export, CubeCountMatchesVoxelCount) {
  Rng rng(2);
  SemanticVolume v({4, 4, 4});
  for (std::size_t i = 0; i < 20; ++i)
    v.set(rng.below(4), rng.below(4), rng.below(4), static_cast<std::uint8_t>(1 + rng.below(11)));
  const auto counts = v.category_counts();
  std::size_t occupied = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) occupied += counts[c];
  const std::string obj = geometry_obj(v);
  EXPECT_EQ(count_lines(obj, "f "), 12 * occupied);
  EXPECT_EQ(count_lines(obj, "v "), 8 * occupied);

  const auto path = std::filesystem::temp_directory_path() / "ssc_export.obj";
  export_geometry(v, path);
  std::ifstream in(path);
  const std::string back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(back, obj);
  std::filesystem::remove(path);
}

}  // namespace
