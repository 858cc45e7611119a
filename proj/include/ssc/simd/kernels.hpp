#pragma once

// Inner-loop kernels shared by the convolution, dense and optimizer code.
//
// Every kernel has a scalar reference implementation. Vector variants
// (AVX2 on x86-64, NEON on AArch64) are compiled into separate translation
// units and selected once at startup from the CPU feature set. The
// SSC_SIMD environment variable ("scalar", "avx2", "neon", "auto") or
// set_backend() overrides the choice.
//
// axpy and adam_update produce results bitwise identical to the scalar
// reference. dot reorders its reduction, so the vector variants agree with
// the scalar one only to rounding.

#include <cstddef>
#include <string_view>

namespace ssc::simd {

enum class Backend { kScalar, kAvx2, kNeon };

struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // One bias-corrected Adam update over n parameters, in place.
  void (*adam_update)(double* param, const double* grad, double* m, double* v,
                      std::size_t n, const AdamCoefficients& c);
};

const KernelTable& kernels();
const KernelTable& kernels_for(Backend backend);

Backend active_backend();
bool backend_supported(Backend backend);
// Throws std::invalid_argument when the backend is not available on this CPU.
void set_backend(Backend backend);

std::string_view backend_name(Backend backend);
Backend parse_backend(std::string_view name);

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(SSC_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(SSC_HAVE_NEON)
extern const KernelTable kNeonKernels;
#endif
}  // namespace detail

}  // namespace ssc::simd
