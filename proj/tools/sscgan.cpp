// Command-line front end: data generation, training, evaluation, export,
// gradient checks and full cross-validated experiments.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ssc/errors.hpp"
#include "ssc/eval/experiment.hpp"
#include "ssc/eval/export.hpp"
#include "ssc/eval/report.hpp"
#include "ssc/models/checkpoint.hpp"
#include "ssc/scene/dataset.hpp"
#include "ssc/simd/kernels.hpp"
#include "ssc/train/config_file.hpp"
#include "ssc/train/grad_suite.hpp"
#include "ssc/train/trainer.hpp"

namespace {

using namespace ssc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitFormat = 3;

std::vector<std::size_t> parse_dims(const std::string& text, std::size_t count, const char* what) {
  std::vector<std::size_t> dims;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, 'x')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(part, &used);
      if (used != part.size() || v == 0) throw std::invalid_argument(part);
      dims.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + " must look like " + (count == 3 ? "DxHxW" : "WxH") + ", got " + text);
    }
  }
  if (dims.size() != count) {
    throw ConfigError(std::string(what) + " must have " + std::to_string(count) + " extents, got " + text);
  }
  return dims;
}

train::RunConfig config_for_data(const std::string& config_path, const scene::Dataset& data) {
  train::RunConfig cfg = train::RunConfig::load(config_path);
  data.validate();
  if (data.size() == 0) throw ConfigError("dataset is empty");
  return cfg;
}

void print_report_summary(const eval::EvalReport& r) {
  std::printf("samples %zu  weighted IoU %.4f  weighted mAP %.4f\n", r.sample_count, r.weighted_iou,
              r.weighted_map);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic scene completion from single depth images"};
  app.require_subcommand(1);
  std::string simd_backend;
  app.add_option("--simd", simd_backend, "Kernel backend: scalar, avx2, neon or auto");

  // gen-data
  std::uint64_t gen_seed = 1;
  std::size_t gen_count = 8;
  std::string gen_extents = "20x12x20";
  std::string gen_depth;
  std::size_t gen_scale = 3;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-data", "Generate synthetic depth/volume pairs");
  gen->add_option("--seed", gen_seed, "Dataset seed");
  gen->add_option("--count", gen_count, "Number of samples");
  gen->add_option("--extents", gen_extents, "Volume extents DxHxW");
  gen->add_option("--depth", gen_depth, "Depth image WxH (default 4D x 5H)");
  gen->add_option("--scale", gen_scale, "Supersampling factor of the generated scenes");
  gen->add_option("--out", gen_out, "Output directory")->required();

  // train
  std::string train_config, train_data, train_out;
  auto* tr = app.add_subcommand("train", "Train all networks on a dataset");
  tr->add_option("--config", train_config, "Configuration file")->required();
  tr->add_option("--data", train_data, "Dataset directory")->required();
  tr->add_option("--out", train_out, "Run directory")->required();

  // eval
  std::string eval_ckpt, eval_data, eval_report;
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  ev->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  ev->add_option("--data", eval_data, "Dataset directory")->required();
  ev->add_option("--report", eval_report, "JSON report path (default: stdout)");

  // export
  std::string export_volume, export_out;
  auto* ex = app.add_subcommand("export", "Write a semantic volume as an OBJ mesh");
  ex->add_option("--volume", export_volume, "Volume .vsem file")->required();
  ex->add_option("--out", export_out, "OBJ output path")->required();

  // grad-check
  std::string gc_module = "all";
  std::uint64_t gc_seed = 1;
  auto* gc = app.add_subcommand("grad-check", "Compare analytic and numeric gradients");
  gc->add_option("--module", gc_module, "Module name or 'all'");
  gc->add_option("--seed", gc_seed, "Seed for inputs and parameters");

  // run
  std::string run_config, run_out;
  auto* run = app.add_subcommand("run", "Full k-fold experiment");
  run->add_option("--config", run_config, "Configuration file")->required();
  run->add_option("--out", run_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!simd_backend.empty() && simd_backend != "auto") simd::set_backend(simd::parse_backend(simd_backend));

    if (*gen) {
      const auto ext = parse_dims(gen_extents, 3, "--extents");
      scene::SyntheticConfig cfg;
      cfg.count = gen_count;
      cfg.seed = gen_seed;
      cfg.volume_extents = {ext[0], ext[1], ext[2]};
      cfg.depth_width = 4 * ext[0];
      cfg.depth_height = 5 * ext[1];
      if (!gen_depth.empty()) {
        const auto wh = parse_dims(gen_depth, 2, "--depth");
        cfg.depth_width = wh[0];
        cfg.depth_height = wh[1];
      }
      cfg.scale = gen_scale;
      scene::save_dataset(gen_out, scene::make_synthetic_dataset(cfg));
      std::printf("wrote %zu samples to %s\n", gen_count, gen_out.c_str());
    } else if (*tr) {
      const scene::Dataset data = scene::load_dataset(train_data);
      const train::RunConfig cfg = config_for_data(train_config, data);
      train::TrainOptions opts;
      opts.out_dir = train_out;
      const std::size_t total = cfg.train.total_steps;
      opts.on_step = [total](const train::StepRecord& r) {
        if ((r.step + 1) % 50 == 0 || r.step + 1 == total) {
          std::printf("step %zu/%zu  recon %.6g\n", r.step + 1, total, r.loss_recon);
        }
      };
      train::train(cfg, data.samples, opts);
      std::printf("run written to %s\n", train_out.c_str());
    } else if (*ev) {
      const models::Checkpoint ckpt = models::load_checkpoint(eval_ckpt);
      const train::RunConfig cfg = train::RunConfig::parse(ckpt.config_text);
      models::Networks nets = models::Networks::create(cfg.arch, cfg.train.seed);
      models::restore_networks(ckpt, nets);
      const scene::Dataset data = scene::load_dataset(eval_data, cfg.arch.num_categories);
      const eval::EvalReport report = eval::evaluate(nets, data.samples, cfg.fingerprint());
      if (eval_report.empty()) {
        std::cout << eval::report_to_json(report) << '\n';
      } else {
        eval::write_report(eval_report, report);
        print_report_summary(report);
      }
    } else if (*ex) {
      eval::export_geometry(scene::load_volume(export_volume), export_out);
    } else if (*gc) {
      std::vector<std::string> modules;
      if (gc_module == "all") {
        modules = train::grad_check_modules();
      } else {
        modules.push_back(gc_module);
      }
      bool ok = true;
      for (const std::string& m : modules) {
        const ad::GradCheckResult r = train::run_grad_check(m, gc_seed);
        const bool pass = r.max_rel_error < 1e-4;
        ok = ok && pass;
        std::printf("%-22s %s  max rel error %.3e  (%zu coords, worst %s[%zu])\n", m.c_str(),
                    pass ? "ok  " : "FAIL", r.max_rel_error, r.coords_checked, r.worst_tensor.c_str(),
                    r.worst_index);
      }
      if (!ok) return kExitNumeric;
    } else if (*run) {
      eval::ExperimentOptions opts;
      opts.out_dir = run_out;
      const eval::ExperimentResult result = eval::run_experiment(std::filesystem::path(run_config), opts);
      for (std::size_t f = 0; f < result.folds.size(); ++f) {
        std::printf("fold %zu: ", f);
        print_report_summary(result.folds[f]);
      }
      std::printf("mean:   ");
      print_report_summary(result.mean);
    }
    return kExitOk;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return kExitFormat;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
