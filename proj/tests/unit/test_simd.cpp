#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "ssc/rng.hpp"
#include "ssc/simd/kernels.hpp"

namespace {

using namespace ssc::simd;

std::vector<Backend> vector_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (backend_supported(b)) out.push_back(b);
  }
  return out;
}

std::vector<double> random_values(ssc::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST(Simd, ScalarAlwaysSupported) {
  EXPECT_TRUE(backend_supported(Backend::kScalar));
  EXPECT_EQ(backend_name(Backend::kScalar), "scalar");
  EXPECT_EQ(parse_backend("avx2"), Backend::kAvx2);
  EXPECT_THROW(parse_backend("sse9"), std::invalid_argument);
}

TEST(Simd, SetBackendRoundTrip) {
  const Backend before = active_backend();
  set_backend(Backend::kScalar);
  EXPECT_EQ(active_backend(), Backend::kScalar);
  EXPECT_EQ(&kernels(), &kernels_for(Backend::kScalar));
  set_backend(before);
  EXPECT_EQ(active_backend(), before);
}

TEST(Simd, UnsupportedBackendRejected) {
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (!backend_supported(b)) {
      EXPECT_THROW(set_backend(b), std::invalid_argument);
    }
  }
}

TEST(Simd, DotMatchesScalarToRounding) {
  ssc::Rng rng(11);
  const KernelTable& ref = kernels_for(Backend::kScalar);
  for (Backend b : vector_backends()) {
    const KernelTable& k = kernels_for(b);
    for (std::size_t n : {0, 1, 3, 4, 7, 8, 15, 16, 33, 100, 1027}) {
      const auto a = random_values(rng, n);
      const auto c = random_values(rng, n);
      double magnitude = 0.0;
      for (std::size_t i = 0; i < n; ++i) magnitude += std::abs(a[i] * c[i]);
      EXPECT_NEAR(k.dot(a.data(), c.data(), n), ref.dot(a.data(), c.data(), n), 1e-14 * (magnitude + 1.0))
          << backend_name(b) << " n=" << n;
    }
  }
}

TEST(Simd, AxpyBitwiseEqualToScalar) {
  ssc::Rng rng(12);
  const KernelTable& ref = kernels_for(Backend::kScalar);
  for (Backend b : vector_backends()) {
    for (std::size_t n : {0, 1, 5, 8, 13, 64, 257}) {
      const auto x = random_values(rng, n);
      auto y1 = random_values(rng, n);
      auto y2 = y1;
      ref.axpy(0.37, x.data(), y1.data(), n);
      kernels_for(b).axpy(0.37, x.data(), y2.data(), n);
      EXPECT_TRUE(same_bits(y1, y2)) << backend_name(b) << " n=" << n;
    }
  }
}

TEST(Simd, AdamBitwiseEqualToScalar) {
  ssc::Rng rng(13);
  const KernelTable& ref = kernels_for(Backend::kScalar);
  const AdamCoefficients c{1e-3, 0.9, 0.999, 1e-8, 1.0 - 0.9 * 0.9, 1.0 - 0.999 * 0.999};
  for (Backend b : vector_backends()) {
    for (std::size_t n : {1, 4, 6, 31, 200}) {
      auto p1 = random_values(rng, n);
      const auto g = random_values(rng, n);
      auto m1 = random_values(rng, n);
      auto v1 = random_values(rng, n);
      for (double& v : v1) v = std::abs(v);
      auto p2 = p1, m2 = m1, v2 = v1;
      ref.adam_update(p1.data(), g.data(), m1.data(), v1.data(), n, c);
      kernels_for(b).adam_update(p2.data(), g.data(), m2.data(), v2.data(), n, c);
      EXPECT_TRUE(same_bits(p1, p2));
      EXPECT_TRUE(same_bits(m1, m2));
      EXPECT_TRUE(same_bits(v1, v2));
    }
  }
}

TEST(Simd, ScalarDotIsExactOnIntegers) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{5, 4, 3, 2, 1};
  EXPECT_EQ(kernels_for(Backend::kScalar).dot(a.data(), b.data(), 5), 35.0);
}

}  // namespace
