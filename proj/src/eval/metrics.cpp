#include "ssc/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "ssc/errors.hpp"

namespace ssc::eval {
namespace {

void check_pair(const scene::Extents3& a, std::size_t nc_a, const scene::Extents3& b, std::size_t nc_b) {
  if (!(a == b) || nc_a != nc_b) {
    throw ShapeError("metric inputs differ: " + scene::to_string(a) + " x" + std::to_string(nc_a) + " vs " +
                     scene::to_string(b) + " x" + std::to_string(nc_b));
  }
}

scene::Extents3 prob_extents(const models::ProbVolume& y) {
  const ad::Shape& s = y.value.shape();
  if (s.size() != 4) throw ShapeError("probability volume must be [D,H,W,N_c]");
  return {s[0], s[1], s[2]};
}

}  // namespace

scene::SemanticVolume argmax_labels(const models::ProbVolume& y) {
  const scene::Extents3 e = prob_extents(y);
  const std::size_t nc = y.value.shape()[3];
  const auto v = y.value.values();
  std::vector<std::uint8_t> labels(e.count());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double* p = v.data() + i * nc;
    std::size_t best = 0;
    for (std::size_t c = 1; c < nc; ++c) {
      if (p[c] > p[best]) best = c;
    }
    labels[i] = static_cast<std::uint8_t>(best);
  }
  return scene::SemanticVolume(e, std::move(labels), scene::category_names_for(nc));
}

double weighted_average(const std::vector<std::optional<double>>& score,
                        const std::vector<std::uint64_t>& gt_count) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t c = 0; c < score.size(); ++c) {
    if (!score[c]) continue;
    num += static_cast<double>(gt_count[c]) * *score[c];
    den += static_cast<double>(gt_count[c]);
  }
  return den > 0.0 ? num / den : 0.0;
}

IouAccumulator::IouAccumulator(std::size_t num_categories)
    : intersection_(num_categories), union_(num_categories), gt_count_(num_categories) {}

void IouAccumulator::add(const scene::SemanticVolume& pred, const scene::SemanticVolume& gt) {
  check_pair(pred.extents(), pred.num_categories(), gt.extents(), gt.num_categories());
  if (gt.num_categories() != gt_count_.size()) throw ShapeError("category count differs from accumulator");
  const auto p = pred.labels();
  const auto g = gt.labels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++gt_count_[g[i]];
    if (p[i] == g[i]) {
      ++intersection_[g[i]];
      ++union_[g[i]];
    } else {
      ++union_[g[i]];
      ++union_[p[i]];
    }
  }
}

CategoryScores IouAccumulator::result() const {
  CategoryScores out;
  out.gt_count = gt_count_;
  for (std::size_t c = 0; c < union_.size(); ++c) {
    if (union_[c] == 0) {
      out.score.push_back(std::nullopt);
    } else {
      out.score.push_back(static_cast<double>(intersection_[c]) / static_cast<double>(union_[c]));
    }
  }
  out.weighted_average = weighted_average(out.score, out.gt_count);
  return out;
}

ApAccumulator::ApAccumulator(std::size_t num_categories)
    : ranked_(num_categories), gt_count_(num_categories) {}

void ApAccumulator::add(const models::ProbVolume& y, const scene::SemanticVolume& gt) {
  check_pair(prob_extents(y), y.value.shape()[3], gt.extents(), gt.num_categories());
  const std::size_t nc = gt.num_categories();
  if (nc != ranked_.size()) throw ShapeError("category count differs from accumulator");
  const auto v = y.value.values();
  const auto g = gt.labels();
  for (std::size_t i = 0; i < g.size(); ++i) {
    ++gt_count_[g[i]];
    for (std::size_t c = 0; c < nc; ++c) ranked_[c].push_back({v[i * nc + c], g[i] == c});
  }
}

CategoryScores ApAccumulator::result() const {
  CategoryScores out;
  out.gt_count = gt_count_;
  for (const std::vector<Entry>& entries : ranked_) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return entries[a].prob > entries[b].prob; });
    std::vector<bool> positives(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) positives[k] = entries[order[k]].positive;
    out.score.push_back(average_precision(positives));
  }
  out.weighted_average = weighted_average(out.score, out.gt_count);
  return out;
}

std::optional<double> average_precision(const std::vector<bool>& positives_in_rank_order) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < positives_in_rank_order.size(); ++k) {
    if (!positives_in_rank_order[k]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  if (hits == 0) return std::nullopt;
  return sum / static_cast<double>(hits);
}

CategoryScores iou(const scene::SemanticVolume& pred, const scene::SemanticVolume& gt) {
  IouAccumulator acc(gt.num_categories());
  acc.add(pred, gt);
  return acc.result();
}

CategoryScores mean_ap(const models::ProbVolume& y, const scene::SemanticVolume& gt) {
  ApAccumulator acc(gt.num_categories());
  acc.add(y, gt);
  return acc.result();
}

}  // namespace ssc::eval
