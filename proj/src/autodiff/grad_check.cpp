#include "ssc/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssc/rng.hpp"

namespace ssc::ad {

GradCheckResult grad_check(const std::function<Tensor()>& loss_fn,
                           const std::vector<NamedTensor>& inputs,
                           const GradCheckOptions& options) {
  GradCheckResult result;
  auto traced = [&](std::uint64_t& digest) {
    detail::begin_branch_trace();
    Tensor loss = loss_fn();
    digest = detail::end_branch_trace();
    return loss;
  };
  std::uint64_t base_digest = 0;
  backward(traced(base_digest));
  std::vector<std::vector<double>> analytic;
  analytic.reserve(inputs.size());
  for (const NamedTensor& in : inputs) {
    analytic.emplace_back(in.tensor.grad().begin(), in.tensor.grad().end());
  }

  Rng rng(options.seed);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    Tensor tensor = inputs[t].tensor;
    const std::size_t n = tensor.numel();
    std::vector<std::size_t> coords(n);
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (n > options.max_coords_per_tensor) {
      rng.shuffle(coords.begin(), coords.end());
      coords.resize(options.max_coords_per_tensor);
      std::sort(coords.begin(), coords.end());
    }
    auto values = tensor.mutable_values();
    for (std::size_t idx : coords) {
      const double original = values[idx];
      std::uint64_t plus_digest = 0;
      std::uint64_t minus_digest = 0;
      values[idx] = original + options.eps;
      const double plus = traced(plus_digest).item();
      values[idx] = original - options.eps;
      const double minus = traced(minus_digest).item();
      values[idx] = original;
      if (options.skip_kinks && (plus_digest != base_digest || minus_digest != base_digest)) {
        ++result.kink_coords;
        continue;
      }
      const double numeric = (plus - minus) / (2.0 * options.eps);
      const double a = analytic[t][idx];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      const double rel = std::abs(a - numeric) / denom;
      ++result.coords_checked;
      if (rel > result.max_rel_error || result.worst_tensor.empty()) {
        result.max_rel_error = rel;
        result.worst_tensor = inputs[t].name;
        result.worst_index = idx;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace ssc::ad
