#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ssc/autodiff/tensor.hpp"

namespace ssc::ad {

struct GradCheckOptions {
  double eps = 1e-5;
  // Coordinates sampled per tensor; tensors at or below this size are checked exhaustively.
  std::size_t max_coords_per_tensor = 48;
  std::uint64_t seed = 0;
  // Leave out coordinates whose +eps or -eps evaluation takes a different
  // rectifier, pool or clamp branch than the unperturbed one; there the
  // central difference does not estimate the derivative.
  bool skip_kinks = true;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coords_checked = 0;
  std::size_t kink_coords = 0;  // skipped, not counted in coords_checked
};

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// Compares reverse-mode gradients of `loss_fn` against central differences.
// Per coordinate the error is
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
// and the maximum over all sampled coordinates is returned. `loss_fn` must
// rebuild its graph from the current values of `inputs` on every call.
GradCheckResult grad_check(const std::function<Tensor()>& loss_fn,
                           const std::vector<NamedTensor>& inputs,
                           const GradCheckOptions& options = {});

}  // namespace ssc::ad
