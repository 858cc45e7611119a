#include "ssc/train/adam.hpp"

#include <cmath>

#include "ssc/errors.hpp"
#include "ssc/simd/kernels.hpp"

namespace ssc::train {

void adam_step(ad::ParamSet& params, const HyperParams& hp) {
  for (const ad::ParamSet::Entry& e : params.entries()) {
    for (double g : e.value.grad()) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient for parameter " + e.name);
    }
  }
  const std::uint64_t t = params.adam_steps() + 1;
  const simd::AdamCoefficients c{hp.learning_rate,
                                 hp.adam_beta1,
                                 hp.adam_beta2,
                                 hp.adam_epsilon,
                                 1.0 - std::pow(hp.adam_beta1, static_cast<double>(t)),
                                 1.0 - std::pow(hp.adam_beta2, static_cast<double>(t))};
  const simd::KernelTable& k = simd::kernels();
  for (ad::ParamSet::Entry& e : params.entries()) {
    const auto grad = e.value.grad();
    k.adam_update(e.value.mutable_values().data(), grad.data(), e.first_moment.data(),
                  e.second_moment.data(), grad.size(), c);
  }
  params.set_adam_steps(t);
}

bool disc_gate(double accuracy, double tau, GateRule rule) {
  return rule == GateRule::kErrorAboveTau ? accuracy < 1.0 - tau : accuracy < tau;
}

}  // namespace ssc::train
