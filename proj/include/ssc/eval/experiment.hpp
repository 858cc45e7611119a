#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ssc/eval/report.hpp"
#include "ssc/train/config_file.hpp"
#include "ssc/train/trainer.hpp"

namespace ssc::eval {

struct ExperimentResult {
  std::vector<EvalReport> folds;
  EvalReport mean;
};

struct ExperimentOptions {
  // When set: data/ (generated sets only), fold_<i>/ training runs,
  // fold_<i>.json and mean.json.
  std::filesystem::path out_dir;
  std::function<void(std::size_t fold, const train::StepRecord&)> on_step;
};

// Builds or loads the dataset, splits it into k folds, trains on each
// training part and evaluates on the held-out fold. Errors keep their type
// and gain the failing stage as a message prefix.
ExperimentResult run_experiment(const train::RunConfig& config, const ExperimentOptions& options = {});
ExperimentResult run_experiment(const std::filesystem::path& config_path,
                                const ExperimentOptions& options = {});

}  // namespace ssc::eval
