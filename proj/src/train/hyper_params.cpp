#include "ssc/train/hyper_params.hpp"

#include <cmath>

#include "ssc/errors.hpp"

namespace ssc::train {
namespace {

void require(bool ok, const char* field, const char* range) {
  if (!ok) throw ConfigError(std::string("train.") + field + " must be " + range);
}

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

void HyperParams::validate() const {
  require(open_unit(gamma), "gamma", "in (0, 1)");
  require(std::isfinite(learning_rate) && learning_rate > 0.0, "learning_rate", "positive");
  require(batch_size > 0, "batch_size", "positive");
  require(std::isfinite(kl_weight) && kl_weight >= 0.0, "kl_weight", "non-negative");
  require(gate_tau >= 0.0 && gate_tau <= 1.0, "gate_tau", "in [0, 1]");
  require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam_beta1", "in [0, 1)");
  require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam_beta2", "in [0, 1)");
  require(std::isfinite(adam_epsilon) && adam_epsilon > 0.0, "adam_epsilon", "positive");
  require(prob_clamp > 0.0 && prob_clamp < 0.5, "prob_clamp", "in (0, 0.5)");
  require(total_steps > 0, "total_steps", "positive");
  require(std::isfinite(weight_vae) && weight_vae >= 0.0, "weight_vae", "non-negative");
  require(std::isfinite(weight_gan_y) && weight_gan_y >= 0.0, "weight_gan_y", "non-negative");
  require(std::isfinite(weight_gan_l) && weight_gan_l >= 0.0, "weight_gan_l", "non-negative");
}

void write_canonical(std::string& out, const HyperParams& hp) {
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  line("train.gamma", format_double(hp.gamma));
  line("train.learning_rate", format_double(hp.learning_rate));
  line("train.batch_size", std::to_string(hp.batch_size));
  line("train.kl_weight", format_double(hp.kl_weight));
  line("train.gate_tau", format_double(hp.gate_tau));
  line("train.gate_rule",
       hp.gate_rule == GateRule::kErrorAboveTau ? "error_above_tau" : "accuracy_below_tau");
  line("train.adam_beta1", format_double(hp.adam_beta1));
  line("train.adam_beta2", format_double(hp.adam_beta2));
  line("train.adam_epsilon", format_double(hp.adam_epsilon));
  line("train.prob_clamp", format_double(hp.prob_clamp));
  line("train.reduction", hp.reduction == Reduction::kSum ? "sum" : "mean");
  line("train.total_steps", std::to_string(hp.total_steps));
  line("train.seed", std::to_string(hp.seed));
  line("train.checkpoint_every", std::to_string(hp.checkpoint_every));
  line("train.weight_vae", format_double(hp.weight_vae));
  line("train.weight_gan_y", format_double(hp.weight_gan_y));
  line("train.weight_gan_l", format_double(hp.weight_gan_l));
}

void read_keys(KeyValues& kv, HyperParams& hp) {
  kv.take("train.gamma", hp.gamma);
  kv.take("train.learning_rate", hp.learning_rate);
  kv.take("train.batch_size", hp.batch_size);
  kv.take("train.kl_weight", hp.kl_weight);
  kv.take("train.gate_tau", hp.gate_tau);
  std::string rule;
  kv.take("train.gate_rule", rule);
  if (rule == "error_above_tau") {
    hp.gate_rule = GateRule::kErrorAboveTau;
  } else if (rule == "accuracy_below_tau") {
    hp.gate_rule = GateRule::kAccuracyBelowTau;
  } else if (!rule.empty()) {
    throw ConfigError("train.gate_rule must be error_above_tau or accuracy_below_tau, got " + rule);
  }
  kv.take("train.adam_beta1", hp.adam_beta1);
  kv.take("train.adam_beta2", hp.adam_beta2);
  kv.take("train.adam_epsilon", hp.adam_epsilon);
  kv.take("train.prob_clamp", hp.prob_clamp);
  std::string reduction;
  kv.take("train.reduction", reduction);
  if (reduction == "sum") {
    hp.reduction = Reduction::kSum;
  } else if (reduction == "mean") {
    hp.reduction = Reduction::kMean;
  } else if (!reduction.empty()) {
    throw ConfigError("train.reduction must be sum or mean, got " + reduction);
  }
  kv.take("train.total_steps", hp.total_steps);
  kv.take_u64("train.seed", hp.seed);
  kv.take("train.checkpoint_every", hp.checkpoint_every);
  kv.take("train.weight_vae", hp.weight_vae);
  kv.take("train.weight_gan_y", hp.weight_gan_y);
  kv.take("train.weight_gan_l", hp.weight_gan_l);
}

}  // namespace ssc::train
