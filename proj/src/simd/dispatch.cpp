#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ssc/simd/kernels.hpp"

namespace ssc::simd {
namespace {

Backend best_supported() {
  if (backend_supported(Backend::kAvx2)) return Backend::kAvx2;
  if (backend_supported(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

Backend initial_backend() {
  const char* env = std::getenv("SSC_SIMD");
  if (env == nullptr || std::string_view(env).empty() || std::string_view(env) == "auto") {
    return best_supported();
  }
  const Backend requested = parse_backend(env);
  return backend_supported(requested) ? requested : Backend::kScalar;
}

struct Active {
  std::atomic<Backend> backend;
  std::atomic<const KernelTable*> table;
};

Active& current() {
  static Active active{initial_backend(), nullptr};
  static const bool init = [] {
    active.table.store(&kernels_for(active.backend.load()));
    return true;
  }();
  (void)init;
  return active;
}

}  // namespace

bool backend_supported(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(SSC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(SSC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Backend backend) {
  if (!backend_supported(backend)) {
    throw std::invalid_argument("simd backend not supported: " +
                                std::string(backend_name(backend)));
  }
  switch (backend) {
#if defined(SSC_HAVE_AVX2)
    case Backend::kAvx2:
      return detail::kAvx2Kernels;
#endif
#if defined(SSC_HAVE_NEON)
    case Backend::kNeon:
      return detail::kNeonKernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

const KernelTable& kernels() { return *current().table.load(std::memory_order_acquire); }

Backend active_backend() { return current().backend.load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_supported(backend)) {
    throw std::invalid_argument("simd backend not supported: " +
                                std::string(backend_name(backend)));
  }
  Active& active = current();
  active.backend.store(backend, std::memory_order_relaxed);
  active.table.store(&kernels_for(backend), std::memory_order_release);
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::kScalar;
  if (name == "avx2") return Backend::kAvx2;
  if (name == "neon") return Backend::kNeon;
  throw std::invalid_argument("unknown simd backend: " + std::string(name));
}

}  // namespace ssc::simd
