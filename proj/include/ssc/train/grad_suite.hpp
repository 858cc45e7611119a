#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssc/autodiff/grad_check.hpp"
#include "ssc/models/arch_config.hpp"

namespace ssc::train {

// Names accepted by run_grad_check: single ops first, then losses, then
// whole networks.
const std::vector<std::string>& grad_check_modules();

// A configuration with every axis at most 8, used for network checks.
models::ArchConfig tiny_arch();

// Finite-difference check of one module with inputs and parameters drawn
// from `seed`. Throws std::invalid_argument for an unknown module.
ad::GradCheckResult run_grad_check(const std::string& module, std::uint64_t seed,
                                   const ad::GradCheckOptions& options = {});

}  // namespace ssc::train
