#pragma once

#include "ssc/autodiff/param_set.hpp"
#include "ssc/train/hyper_params.hpp"

namespace ssc::train {

// One bias-corrected Adam update of every parameter from its current
// gradient. Throws NumericError, leaving the set untouched, if any gradient
// is not finite.
void adam_step(ad::ParamSet& params, const HyperParams& hp);

// Whether a discriminator with the given batch accuracy should be updated.
bool disc_gate(double accuracy, double tau, GateRule rule = GateRule::kErrorAboveTau);

}  // namespace ssc::train
