#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssc/models/networks.hpp"
#include "ssc/scene/vsem.hpp"

namespace ssc::eval {

struct EvalReport {
  std::vector<std::string> category_names;
  std::vector<std::optional<double>> iou;  // nullopt: empty union
  std::vector<std::optional<double>> ap;   // nullopt: no ground-truth voxels
  std::vector<std::uint64_t> voxel_counts; // ground truth
  double weighted_iou = 0.0;
  double weighted_map = 0.0;
  std::size_t sample_count = 0;
  std::string config_fingerprint;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Predicts every sample with E_dep and G and pools IoU and AP over the set.
EvalReport evaluate(const models::Networks& nets, std::span<const scene::Sample> samples,
                    const std::string& fingerprint);

// Per-category means over the reports where a score exists, summed counts
// and sample totals, weighted averages recomputed from those fields.
EvalReport mean_report(const std::vector<EvalReport>& reports);

// Both weighted averages equal their recomputation from the per-category
// fields, and every score lies in [0, 1].
bool weighted_identity_holds(const EvalReport& r);

std::string report_to_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);
void write_report(const std::filesystem::path& path, const EvalReport& r);

}  // namespace ssc::eval
