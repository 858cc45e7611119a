#pragma once

// Differentiable operators used by the encoder, generator and discriminator
// networks. Spatial tensors are channel-last: [H, W, C] for images and
// [D, H, W, C] for volumes, row-major with the channel axis fastest.

#include <array>
#include <cstddef>
#include <span>

#include "ssc/autodiff/tensor.hpp"

namespace ssc::ad {

enum class Padding { kSame, kValid };

// Output extent of a strided window along one axis. Throws ShapeError when
// the kernel does not fit the (padded) input.
std::size_t conv_output_extent(std::size_t input, std::size_t kernel, std::size_t stride,
                               Padding padding);
// Leading zero-padding applied by `same` convolution along one axis.
std::size_t same_padding_before(std::size_t input, std::size_t kernel, std::size_t stride);
// 2x2 stride-2 max-pooling discards a trailing odd row or column.
constexpr std::size_t pool_output_extent(std::size_t input) { return input / 2; }

// --- elementwise and reductions ---
// Neumaier-compensated sum of a range; used by reductions over many voxels.
double accurate_sum(std::span<const double> values);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double factor);
Tensor add_scalar(const Tensor& x, double offset);
Tensor exp(const Tensor& x);
Tensor log(const Tensor& x);
// Gradient is zero where the input lies outside [lo, hi].
Tensor clamp(const Tensor& x, double lo, double hi);
// Compensated (Neumaier) summation.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);

struct Activation {
  enum class Kind { kLeakyRelu, kRelu, kSigmoid };
  Kind kind;
  double alpha = 0.2;  // leaky_relu negative slope

  static Activation leaky_relu(double alpha = 0.2) { return {Kind::kLeakyRelu, alpha}; }
  static Activation relu() { return {Kind::kRelu, 0.0}; }
  static Activation sigmoid() { return {Kind::kSigmoid, 0.0}; }
};

// At 0 the rectifiers use the positive-side slope.
Tensor activation(const Tensor& x, Activation act);
inline Tensor relu(const Tensor& x) { return activation(x, Activation::relu()); }
inline Tensor leaky_relu(const Tensor& x, double alpha = 0.2) {
  return activation(x, Activation::leaky_relu(alpha));
}
inline Tensor sigmoid(const Tensor& x) { return activation(x, Activation::sigmoid()); }

// --- structural ---
Tensor reshape(const Tensor& x, Shape new_shape);
// Channels [begin, end) of the last axis.
Tensor slice_last_axis(const Tensor& x, std::size_t begin, std::size_t end);
// x[..., c] + bias[c]
Tensor add_channel_bias(const Tensor& x, const Tensor& bias);

// --- layers ---
// input [n], weights [n, m], bias [m] -> [m]
Tensor dense(const Tensor& input, const Tensor& weights, const Tensor& bias);

// input [H, W, Cin], kernel [kh, kw, Cin, Cout] -> [H', W', Cout]
Tensor conv2d(const Tensor& input, const Tensor& kernel, std::array<std::size_t, 2> stride,
              Padding padding);

// 2x2 windows, stride 2. Ties route the gradient to the first element in
// scan order.
Tensor maxpool2d(const Tensor& input);

// input [D, H, W, Cin], kernel [kd, kh, kw, Cin, Cout] -> [D', H', W', Cout]
Tensor conv3d(const Tensor& input, const Tensor& kernel, std::array<std::size_t, 3> stride,
              Padding padding);

// Transposed convolution: the adjoint of a `same` conv3d mapping
// [s*D, s*H, s*W, Cout] to [D, H, W, Cin]. input [D, H, W, Cin],
// kernel [kd, kh, kw, Cout, Cin] -> [s*D, s*H, s*W, Cout].
Tensor deconv3d(const Tensor& input, const Tensor& kernel, std::array<std::size_t, 3> stride);

}  // namespace ssc::ad
