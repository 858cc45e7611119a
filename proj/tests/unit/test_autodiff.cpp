#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ssc/autodiff/grad_check.hpp"
#include "ssc/autodiff/ops.hpp"
#include "ssc/autodiff/param_set.hpp"
#include "ssc/errors.hpp"
#include "ssc/rng.hpp"
#include "ssc/train/grad_suite.hpp"

namespace {

using namespace ssc;
using ad::Padding;
using ad::Tensor;

Tensor ones(ad::Shape s, bool grad = false) { return Tensor::full(std::move(s), 1.0, grad); }

Tensor random(Rng& rng, ad::Shape s, bool grad = false) {
  std::vector<double> v(ad::shape_numel(s));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from_values(std::move(s), std::move(v), grad);
}

double dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) s += a.at(i) * b.at(i);
  return s;
}

TEST(Tensor, ConstructionAndShape) {
  const Tensor t = Tensor::zeros({2, 3, 4});
  EXPECT_EQ(t.numel(), 24u);
  EXPECT_EQ(t.rank(), 3u);
  EXPECT_EQ(ad::shape_to_string(t.shape()), "[2x3x4]");
  EXPECT_THROW(Tensor::from_values({2, 2}, {1.0, 2.0}), ShapeError);
}

TEST(Tensor, BackwardOfSumOfProduct) {
  Tensor a = Tensor::from_values({3}, {1.0, 2.0, 3.0}, true);
  Tensor b = Tensor::from_values({3}, {4.0, 5.0, 6.0}, true);
  const Tensor loss = ad::sum(ad::mul(a, b));
  EXPECT_EQ(loss.item(), 32.0);
  ad::backward(loss);
  EXPECT_EQ(a.grad()[0], 4.0);
  EXPECT_EQ(b.grad()[2], 3.0);
}

TEST(Tensor, BackwardIsRepeatable) {
  Tensor a = Tensor::from_values({2}, {1.5, -2.0}, true);
  const Tensor loss = ad::sum(ad::mul(a, a));
  ad::backward(loss);
  const double g0 = a.grad()[0];
  ad::backward(loss);
  EXPECT_EQ(a.grad()[0], g0);
}

TEST(Tensor, SharedSubexpressionAccumulates) {
  Tensor a = Tensor::from_values({1}, {3.0}, true);
  const Tensor b = ad::add(a, a);
  ad::backward(ad::sum(ad::mul(b, a)));  // 2a^2
  EXPECT_EQ(a.grad()[0], 12.0);
}

TEST(Tensor, NonScalarOrNonFiniteLossRejected) {
  Tensor a = Tensor::from_values({2}, {1.0, 2.0}, true);
  EXPECT_THROW(ad::backward(a), ShapeError);
  Tensor z = Tensor::from_values({1}, {0.0}, true);
  EXPECT_THROW(ad::backward(ad::sum(ad::log(z))), NumericError);
}

TEST(Tensor, ConstantsCarryNoGraph) {
  const Tensor a = ones({2});
  const Tensor b = ad::add(a, a);
  EXPECT_FALSE(b.requires_grad());
  EXPECT_TRUE(b.node()->parents.empty());
}

TEST(Tensor, DetachCutsHistory) {
  Tensor a = Tensor::from_values({1}, {2.0}, true);
  const Tensor d = ad::mul(a, a).detach();
  EXPECT_FALSE(d.requires_grad());
  EXPECT_EQ(d.item(), 4.0);
}

TEST(Tensor, LiveNodeCounterTracksGraphs) {
  const std::size_t before = ad::detail::live_node_count();
  {
    const Tensor t = ad::add(ones({3}), ones({3}));
    EXPECT_GT(ad::detail::live_node_count(), before);
  }
  EXPECT_EQ(ad::detail::live_node_count(), before);
}

TEST(Ops, ElementwiseShapeMismatch) {
  EXPECT_THROW(ad::add(ones({2}), ones({3})), ShapeError);
  EXPECT_THROW(ad::mul(ones({2, 1}), ones({1, 2})), ShapeError);
}

TEST(Ops, ActivationsAtZeroUsePositiveSlope) {
  Tensor x = Tensor::from_values({3}, {-2.0, 0.0, 3.0}, true);
  const Tensor y = ad::leaky_relu(x, 0.2);
  EXPECT_DOUBLE_EQ(y.at(0), -0.4);
  EXPECT_EQ(y.at(1), 0.0);
  ad::backward(ad::sum(y));
  EXPECT_DOUBLE_EQ(x.grad()[0], 0.2);
  EXPECT_EQ(x.grad()[1], 1.0);
  EXPECT_THROW(ad::leaky_relu(x, 1.5), std::invalid_argument);
  EXPECT_EQ(ad::relu(x).at(0), 0.0);
}

TEST(Ops, SigmoidIsStableAtExtremes) {
  const Tensor y = ad::sigmoid(Tensor::from_values({3}, {-800.0, 0.0, 800.0}));
  EXPECT_EQ(y.at(0), 0.0);
  EXPECT_EQ(y.at(1), 0.5);
  EXPECT_EQ(y.at(2), 1.0);
}

TEST(Ops, ClampHasZeroGradientOutside) {
  Tensor x = Tensor::from_values({3}, {-1.0, 0.5, 2.0}, true);
  ad::backward(ad::sum(ad::clamp(x, 0.0, 1.0)));
  EXPECT_EQ(x.grad()[0], 0.0);
  EXPECT_EQ(x.grad()[1], 1.0);
  EXPECT_EQ(x.grad()[2], 0.0);
}

TEST(Ops, SumIsCompensated) {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(ad::sum(Tensor::from_values({4}, v)).item(), 2.0);
}

TEST(Ops, SliceAndReshape) {
  std::vector<double> v(12);
  std::iota(v.begin(), v.end(), 0.0);
  const Tensor x = Tensor::from_values({3, 4}, v);
  const Tensor s = ad::slice_last_axis(x, 1, 3);
  EXPECT_EQ(s.shape(), (ad::Shape{3, 2}));
  EXPECT_EQ(s.at(0), 1.0);
  EXPECT_EQ(s.at(5), 10.0);
  EXPECT_THROW(ad::slice_last_axis(x, 3, 5), ShapeError);
  EXPECT_EQ(ad::reshape(x, {2, 6}).at(7), 7.0);
  EXPECT_THROW(ad::reshape(x, {5}), ShapeError);
}

TEST(Ops, DenseMatchesManualProduct) {
  const Tensor x = Tensor::from_values({2}, {1.0, 2.0});
  const Tensor w = Tensor::from_values({2, 3}, {1, 2, 3, 4, 5, 6});
  const Tensor b = Tensor::from_values({3}, {0.5, 0.5, 0.5});
  const Tensor y = ad::dense(x, w, b);
  EXPECT_EQ(y.at(0), 9.5);
  EXPECT_EQ(y.at(2), 15.5);
  EXPECT_THROW(ad::dense(x, Tensor::zeros({3, 3}), b), ShapeError);
}

TEST(Conv, SamePaddingKeepsExtent) {
  const Tensor y = ad::conv2d(ones({320, 240, 1}), ones({3, 3, 1, 4}), {1, 1}, Padding::kSame);
  EXPECT_EQ(y.shape(), (ad::Shape{320, 240, 4}));
}

TEST(Conv, ValidOnesGivesNine) {
  const Tensor y = ad::conv2d(ones({4, 4, 1}), ones({3, 3, 1, 1}), {1, 1}, Padding::kValid);
  EXPECT_EQ(y.shape(), (ad::Shape{2, 2, 1}));
  for (double v : y.values()) EXPECT_EQ(v, 9.0);
}

TEST(Conv, KernelLargerThanValidInputRejected) {
  EXPECT_THROW(ad::conv2d(ones({2, 2, 1}), ones({3, 3, 1, 1}), {1, 1}, Padding::kValid), ShapeError);
  EXPECT_THROW(ad::conv2d(ones({4, 4, 2}), ones({3, 3, 1, 1}), {1, 1}, Padding::kSame), ShapeError);
  EXPECT_THROW(ad::conv2d(ones({4, 4, 1}), ones({3, 3, 1, 1}), {0, 1}, Padding::kSame), std::invalid_argument);
}

TEST(Conv, MaxPoolFloorsOddExtents) {
  std::vector<double> v(5 * 3);
  std::iota(v.begin(), v.end(), 0.0);
  const Tensor y = ad::maxpool2d(Tensor::from_values({5, 3, 1}, v));
  EXPECT_EQ(y.shape(), (ad::Shape{2, 1, 1}));
  EXPECT_EQ(y.at(0), 4.0);
  EXPECT_EQ(y.at(1), 10.0);
}

TEST(Conv, MaxPoolTieRoutesToFirst) {
  Tensor x = ones({2, 2, 1}, true);
  ad::backward(ad::sum(ad::maxpool2d(x)));
  EXPECT_EQ(x.grad()[0], 1.0);
  EXPECT_EQ(x.grad()[1] + x.grad()[2] + x.grad()[3], 0.0);
}

TEST(Conv, Conv3dStrideTwoSame) {
  const Tensor y = ad::conv3d(ones({2, 2, 2, 1}), ones({3, 3, 3, 1, 1}), {2, 2, 2}, Padding::kSame);
  EXPECT_EQ(y.shape(), (ad::Shape{1, 1, 1, 1}));
  EXPECT_EQ(y.item(), 8.0);
  const Tensor z = ad::conv3d(ones({80, 48, 80, 1}), ones({3, 3, 3, 1, 2}), {2, 2, 2}, Padding::kSame);
  EXPECT_EQ(z.shape(), (ad::Shape{40, 24, 40, 2}));
}

TEST(Conv, DeconvDoublesExtents) {
  const Tensor y = ad::deconv3d(ones({5, 3, 5, 16}), ones({3, 3, 3, 4, 16}), {2, 2, 2});
  EXPECT_EQ(y.shape(), (ad::Shape{10, 6, 10, 4}));
}

TEST(Conv, DeconvSingleVoxelTouchesStridePattern) {
  const Tensor y = ad::deconv3d(Tensor::from_values({1, 1, 1, 1}, {2.5}), ones({3, 3, 3, 1, 1}), {2, 2, 2});
  EXPECT_EQ(y.shape(), (ad::Shape{2, 2, 2, 1}));
  for (double v : y.values()) EXPECT_EQ(v, 2.5);
}

TEST(Conv, DeconvEqualsConvInputGradient) {
  Rng rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const Tensor kernel = random(rng, {3, 3, 3, 2, 3});  // conv: 2 -> 3 channels
    Tensor x = random(rng, {6, 4, 8, 2}, true);
    const Tensor gout = random(rng, {3, 2, 4, 3});
    ad::backward(ad::sum(ad::mul(ad::conv3d(x, kernel, {2, 2, 2}, Padding::kSame), gout)));
    // deconv kernel layout [kd,kh,kw,Cout,Cin] is the conv kernel read with
    // roles swapped: conv Cin becomes deconv Cout.
    const Tensor y = ad::deconv3d(gout, kernel, {2, 2, 2});
    ASSERT_EQ(y.shape(), x.shape());
    for (std::size_t i = 0; i < y.numel(); ++i) ASSERT_NEAR(y.at(i), x.grad()[i], 1e-12) << i;
  }
}

TEST(Conv, DeconvIsAdjointOfConv) {
  Rng rng(6);
  const Tensor kernel = random(rng, {3, 3, 3, 2, 3});
  const Tensor x = random(rng, {4, 6, 4, 2});
  const Tensor z = random(rng, {2, 3, 2, 3});
  const double lhs = dot(ad::conv3d(x, kernel, {2, 2, 2}, Padding::kSame), z);
  const double rhs = dot(x, ad::deconv3d(z, kernel, {2, 2, 2}));
  EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + 1.0));
}

TEST(ParamSet, GlorotWithinLimitAndSeeded) {
  Rng a(3), b(3);
  ad::ParamSet p, q;
  p.add_glorot("w", {4, 5}, 4, 5, a);
  q.add_glorot("w", {4, 5}, 4, 5, b);
  EXPECT_TRUE(p.values_equal(q));
  const double limit = std::sqrt(6.0 / 9.0);
  for (double v : p.get("w").values()) EXPECT_LE(std::abs(v), limit);
  EXPECT_THROW(p.add("w", {1}), std::invalid_argument);
  EXPECT_THROW(p.get("missing"), std::out_of_range);
}

TEST(ParamSet, CloneIsDeep) {
  Rng rng(1);
  ad::ParamSet p;
  p.add_glorot("w", {3}, 1, 1, rng);
  ad::ParamSet c = p.clone();
  c.get("w").mutable_values()[0] += 1.0;
  EXPECT_FALSE(p.values_equal(c));
}

TEST(GradCheck, EveryModulePassesOnFiveSeeds) {
  for (const std::string& m : train::grad_check_modules()) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ad::GradCheckResult r = train::run_grad_check(m, seed);
      EXPECT_LT(r.max_rel_error, 1e-4) << m << " seed " << seed << " worst " << r.worst_tensor << "["
                                       << r.worst_index << "]";
      EXPECT_GT(r.coords_checked, 0u) << m;
    }
  }
}

TEST(GradCheck, DetectsWrongGradient) {
  Tensor x = Tensor::from_values({3}, {0.3, -0.2, 0.9}, true);
  auto broken = [x] {
    return Tensor::make_result("broken_square", {1}, {x.at(0) * x.at(0) + x.at(1) * x.at(1) + x.at(2) * x.at(2)},
                               {x}, [](ad::detail::Node& self) {
                                 auto& p = *self.parents[0];
                                 for (std::size_t i = 0; i < p.value.size(); ++i) {
                                   p.grad[i] += self.grad[0] * 2.2 * p.value[i];
                                 }
                               });
  };
  EXPECT_GT(ad::grad_check(broken, {{"x", x}}).max_rel_error, 1e-2);
}

TEST(GradCheck, KinkStraddlingCoordinatesAreSkipped) {
  Tensor x = Tensor::from_values({2}, {1e-7, 0.5}, true);
  const ad::GradCheckResult r = ad::grad_check([x] { return ad::sum(ad::relu(x)); }, {{"x", x}});
  EXPECT_EQ(r.kink_coords, 1u);
  EXPECT_EQ(r.coords_checked, 1u);
  EXPECT_LT(r.max_rel_error, 1e-8);
  ad::GradCheckOptions keep;
  keep.skip_kinks = false;
  EXPECT_GT(ad::grad_check([x] { return ad::sum(ad::relu(x)); }, {{"x", x}}, keep).max_rel_error, 1e-2);
}

TEST(GradCheck, UnknownModuleRejected) {
  EXPECT_THROW(train::run_grad_check("no_such_module", 1), std::invalid_argument);
}

}  // namespace
