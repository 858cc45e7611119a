#include "ssc/eval/experiment.hpp"

#include "ssc/errors.hpp"
#include "ssc/scene/dataset.hpp"
#include "ssc/scene/kfold.hpp"

namespace ssc::eval {
namespace {

template <typename Fn>
auto staged(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = stage + ": ";
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const FormatError& e) {
    throw FormatError(e.kind(), prefix + e.what());
  } catch (const PlacementError& e) {
    throw PlacementError(prefix + e.what());
  }
}

std::vector<scene::Sample> pick(const scene::Dataset& data, const std::vector<std::size_t>& indices) {
  std::vector<scene::Sample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(data.samples[i]);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const train::RunConfig& config, const ExperimentOptions& options) {
  const scene::Dataset data = staged("dataset", [&] {
    scene::Dataset d = config.experiment.data_dir.empty()
                           ? scene::make_synthetic_dataset(config.synthetic())
                           : scene::load_dataset(config.experiment.data_dir, config.arch.num_categories);
    d.validate();
    if (!options.out_dir.empty() && config.experiment.data_dir.empty()) {
      scene::save_dataset(options.out_dir / "data", d);
    }
    return d;
  });
  const std::vector<scene::Fold> folds = staged("split", [&] {
    try {
      return scene::kfold_split(data.size(), config.experiment.folds, config.experiment.split_seed);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  });

  ExperimentResult result;
  const std::string fingerprint = config.fingerprint();
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const std::string stage = "fold " + std::to_string(f);
    const std::vector<scene::Sample> train_set = pick(data, folds[f].train);
    const std::vector<scene::Sample> test_set = pick(data, folds[f].test);
    train::TrainOptions topt;
    if (!options.out_dir.empty()) topt.out_dir = options.out_dir / ("fold_" + std::to_string(f));
    if (options.on_step) topt.on_step = [&, f](const train::StepRecord& r) { options.on_step(f, r); };
    const train::TrainState state =
        staged(stage + " training", [&] { return train::train(config, train_set, topt); });
    EvalReport report = staged(stage + " evaluation", [&] { return evaluate(state.nets, test_set, fingerprint); });
    if (!options.out_dir.empty()) {
      write_report(options.out_dir / ("fold_" + std::to_string(f) + ".json"), report);
    }
    result.folds.push_back(std::move(report));
  }
  result.mean = mean_report(result.folds);
  if (!options.out_dir.empty()) write_report(options.out_dir / "mean.json", result.mean);
  return result;
}

ExperimentResult run_experiment(const std::filesystem::path& config_path, const ExperimentOptions& options) {
  const train::RunConfig config = staged("config", [&] { return train::RunConfig::load(config_path.string()); });
  return run_experiment(config, options);
}

}  // namespace ssc::eval
