#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssc/models/networks.hpp"
#include "ssc/scene/volume.hpp"

namespace ssc::eval {

// Per voxel, the category of highest probability; ties go to the lowest index.
scene::SemanticVolume argmax_labels(const models::ProbVolume& y);

// Per-category scores with ground-truth voxel counts. A category without a
// score (empty union for IoU, no positives for AP) carries weight 0 in the
// weighted average.
struct CategoryScores {
  std::vector<std::optional<double>> score;
  std::vector<std::uint64_t> gt_count;
  double weighted_average = 0.0;
};

// sum_c count_c * score_c / sum_c count_c over categories with a score; 0 if none.
double weighted_average(const std::vector<std::optional<double>>& score,
                        const std::vector<std::uint64_t>& gt_count);

// Intersection and union counts pooled over any number of volume pairs.
class IouAccumulator {
 public:
  explicit IouAccumulator(std::size_t num_categories);
  void add(const scene::SemanticVolume& pred, const scene::SemanticVolume& gt);
  CategoryScores result() const;

 private:
  std::vector<std::uint64_t> intersection_;
  std::vector<std::uint64_t> union_;
  std::vector<std::uint64_t> gt_count_;
};

// Per-category rankings pooled over samples; ties keep insertion order.
class ApAccumulator {
 public:
  explicit ApAccumulator(std::size_t num_categories);
  void add(const models::ProbVolume& y, const scene::SemanticVolume& gt);
  CategoryScores result() const;

 private:
  struct Entry {
    double prob;
    bool positive;
  };
  std::vector<std::vector<Entry>> ranked_;
  std::vector<std::uint64_t> gt_count_;
};

CategoryScores iou(const scene::SemanticVolume& pred, const scene::SemanticVolume& gt);
CategoryScores mean_ap(const models::ProbVolume& y, const scene::SemanticVolume& gt);

// Average precision of one ranking given as positives in rank order; nullopt without positives.
std::optional<double> average_precision(const std::vector<bool>& positives_in_rank_order);

}  // namespace ssc::eval
