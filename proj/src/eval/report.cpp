#include "ssc/eval/report.hpp"

#include <fstream>

#include <json.hpp>

#include "ssc/errors.hpp"
#include "ssc/eval/metrics.hpp"

namespace ssc::eval {
namespace {

using nlohmann::json;

json optional_array(const std::vector<std::optional<double>>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x ? json(*x) : json(nullptr));
  return out;
}

std::vector<std::optional<double>> optional_vector(const json& j) {
  std::vector<std::optional<double>> out;
  for (const json& x : j) {
    out.push_back(x.is_null() ? std::nullopt : std::optional<double>(x.get<double>()));
  }
  return out;
}

std::vector<std::optional<double>> mean_scores(const std::vector<EvalReport>& reports,
                                               std::vector<std::optional<double>> EvalReport::*field) {
  const std::size_t nc = (reports.front().*field).size();
  std::vector<std::optional<double>> out(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const EvalReport& r : reports) {
      const auto& s = (r.*field)[c];
      if (!s) continue;
      sum += *s;
      ++n;
    }
    if (n > 0) out[c] = sum / static_cast<double>(n);
  }
  return out;
}

bool in_unit(const std::vector<std::optional<double>>& v) {
  for (const auto& x : v) {
    if (x && !(*x >= 0.0 && *x <= 1.0)) return false;
  }
  return true;
}

}  // namespace

EvalReport evaluate(const models::Networks& nets, std::span<const scene::Sample> samples,
                    const std::string& fingerprint) {
  const std::size_t nc = nets.config.num_categories;
  IouAccumulator iou_acc(nc);
  ApAccumulator ap_acc(nc);
  for (const scene::Sample& s : samples) {
    const models::ProbVolume y = models::generate(models::encode_depth(s.depth, nets.e_dep), nets.gen);
    iou_acc.add(argmax_labels(y), s.volume);
    ap_acc.add(y, s.volume);
  }
  const CategoryScores iou_scores = iou_acc.result();
  const CategoryScores ap_scores = ap_acc.result();
  EvalReport r;
  r.category_names = scene::category_names_for(nc);
  r.iou = iou_scores.score;
  r.ap = ap_scores.score;
  r.voxel_counts = iou_scores.gt_count;
  r.weighted_iou = iou_scores.weighted_average;
  r.weighted_map = ap_scores.weighted_average;
  r.sample_count = samples.size();
  r.config_fingerprint = fingerprint;
  return r;
}

EvalReport mean_report(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("mean_report needs at least one report");
  EvalReport out;
  out.category_names = reports.front().category_names;
  out.config_fingerprint = reports.front().config_fingerprint;
  out.iou = mean_scores(reports, &EvalReport::iou);
  out.ap = mean_scores(reports, &EvalReport::ap);
  out.voxel_counts.assign(out.category_names.size(), 0);
  for (const EvalReport& r : reports) {
    if (r.voxel_counts.size() != out.voxel_counts.size()) throw ShapeError("reports differ in category count");
    for (std::size_t c = 0; c < r.voxel_counts.size(); ++c) out.voxel_counts[c] += r.voxel_counts[c];
    out.sample_count += r.sample_count;
  }
  out.weighted_iou = weighted_average(out.iou, out.voxel_counts);
  out.weighted_map = weighted_average(out.ap, out.voxel_counts);
  return out;
}

bool weighted_identity_holds(const EvalReport& r) {
  return r.weighted_iou == weighted_average(r.iou, r.voxel_counts) &&
         r.weighted_map == weighted_average(r.ap, r.voxel_counts) && in_unit(r.iou) && in_unit(r.ap) &&
         r.weighted_iou >= 0.0 && r.weighted_iou <= 1.0 && r.weighted_map >= 0.0 && r.weighted_map <= 1.0;
}

std::string report_to_json(const EvalReport& r) {
  json j;
  j["categories"] = r.category_names;
  j["iou"] = optional_array(r.iou);
  j["ap"] = optional_array(r.ap);
  j["voxel_counts"] = r.voxel_counts;
  j["weighted_iou"] = r.weighted_iou;
  j["weighted_map"] = r.weighted_map;
  j["samples"] = r.sample_count;
  j["config_fingerprint"] = r.config_fingerprint;
  return j.dump(2);
}

EvalReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    EvalReport r;
    r.category_names = j.at("categories").get<std::vector<std::string>>();
    r.iou = optional_vector(j.at("iou"));
    r.ap = optional_vector(j.at("ap"));
    r.voxel_counts = j.at("voxel_counts").get<std::vector<std::uint64_t>>();
    r.weighted_iou = j.at("weighted_iou").get<double>();
    r.weighted_map = j.at("weighted_map").get<double>();
    r.sample_count = j.at("samples").get<std::size_t>();
    r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(FormatError::Kind::kBadHeader, std::string("malformed report: ") + e.what());
  }
}

void write_report(const std::filesystem::path& path, const EvalReport& r) {
  std::ofstream out(path);
  out << report_to_json(r) << '\n';
  if (!out) throw FormatError(FormatError::Kind::kIo, "cannot write " + path.string());
}

}  // namespace ssc::eval
