#include <cstdint>

#include "ssc/autodiff/ops.hpp"
#include "ssc/errors.hpp"
#include "ssc/simd/kernels.hpp"

namespace ssc::ad {

std::size_t conv_output_extent(std::size_t input, std::size_t kernel, std::size_t stride,
                               Padding padding) {
  if (stride == 0 || kernel == 0) throw ShapeError("convolution stride and kernel must be >= 1");
  if (padding == Padding::kSame) return (input + stride - 1) / stride;
  if (kernel > input) {
    throw ShapeError("kernel extent " + std::to_string(kernel) + " exceeds input extent " +
                     std::to_string(input));
  }
  return (input - kernel) / stride + 1;
}

std::size_t same_padding_before(std::size_t input, std::size_t kernel, std::size_t stride) {
  const std::size_t out = (input + stride - 1) / stride;
  const std::size_t needed = (out - 1) * stride + kernel;
  return needed > input ? (needed - input) / 2 : 0;
}

namespace {

using detail::Node;

// A strided correlation over three spatial axes (2D uses a unit leading
// axis). Layouts: input [i0,i1,i2,cin], output [o0,o1,o2,cout],
// kernel [k0,k1,k2,cin,cout].
struct ConvGeometry {
  std::array<std::size_t, 3> in{};
  std::array<std::size_t, 3> out{};
  std::array<std::size_t, 3> kernel{};
  std::array<std::size_t, 3> stride{};
  std::array<std::size_t, 3> pad{};
  std::size_t cin = 0;
  std::size_t cout = 0;

  std::size_t kernel_taps() const { return kernel[0] * kernel[1] * kernel[2]; }
};

// Visits every (output position, kernel tap, input position) triple whose
// input position lies inside the unpadded input, in a fixed scan order.
template <typename Visit>
void for_each_tap(const ConvGeometry& g, Visit visit) {
  for (std::size_t o0 = 0; o0 < g.out[0]; ++o0) {
    for (std::size_t o1 = 0; o1 < g.out[1]; ++o1) {
      for (std::size_t o2 = 0; o2 < g.out[2]; ++o2) {
        const std::size_t out_index = (o0 * g.out[1] + o1) * g.out[2] + o2;
        for (std::size_t t0 = 0; t0 < g.kernel[0]; ++t0) {
          const std::int64_t i0 = static_cast<std::int64_t>(o0 * g.stride[0] + t0) -
                                  static_cast<std::int64_t>(g.pad[0]);
          if (i0 < 0 || i0 >= static_cast<std::int64_t>(g.in[0])) continue;
          for (std::size_t t1 = 0; t1 < g.kernel[1]; ++t1) {
            const std::int64_t i1 = static_cast<std::int64_t>(o1 * g.stride[1] + t1) -
                                    static_cast<std::int64_t>(g.pad[1]);
            if (i1 < 0 || i1 >= static_cast<std::int64_t>(g.in[1])) continue;
            for (std::size_t t2 = 0; t2 < g.kernel[2]; ++t2) {
              const std::int64_t i2 = static_cast<std::int64_t>(o2 * g.stride[2] + t2) -
                                      static_cast<std::int64_t>(g.pad[2]);
              if (i2 < 0 || i2 >= static_cast<std::int64_t>(g.in[2])) continue;
              const std::size_t in_index =
                  (static_cast<std::size_t>(i0) * g.in[1] + static_cast<std::size_t>(i1)) *
                      g.in[2] +
                  static_cast<std::size_t>(i2);
              const std::size_t tap = (t0 * g.kernel[1] + t1) * g.kernel[2] + t2;
              visit(out_index, tap, in_index);
            }
          }
        }
      }
    }
  }
}

// out += conv(in, kernel)
void conv_forward(const ConvGeometry& g, const double* in, const double* kernel, double* out) {
  const auto& k = simd::kernels();
  const std::size_t tap_stride = g.cin * g.cout;
  for_each_tap(g, [&](std::size_t o, std::size_t tap, std::size_t i) {
    const double* x = in + i * g.cin;
    const double* w = kernel + tap * tap_stride;
    double* y = out + o * g.cout;
    for (std::size_t ci = 0; ci < g.cin; ++ci) k.axpy(x[ci], w + ci * g.cout, y, g.cout);
  });
}

// grad_in += conv^T(grad_out, kernel). Also the forward rule of deconv3d.
void conv_input_grad(const ConvGeometry& g, const double* grad_out, const double* kernel,
                     double* grad_in) {
  const auto& k = simd::kernels();
  const std::size_t tap_stride = g.cin * g.cout;
  for_each_tap(g, [&](std::size_t o, std::size_t tap, std::size_t i) {
    const double* gy = grad_out + o * g.cout;
    const double* w = kernel + tap * tap_stride;
    double* gx = grad_in + i * g.cin;
    for (std::size_t ci = 0; ci < g.cin; ++ci) gx[ci] += k.dot(w + ci * g.cout, gy, g.cout);
  });
}

// grad_kernel += correlation of input with grad_out.
void conv_kernel_grad(const ConvGeometry& g, const double* in, const double* grad_out,
                      double* grad_kernel) {
  const auto& k = simd::kernels();
  const std::size_t tap_stride = g.cin * g.cout;
  for_each_tap(g, [&](std::size_t o, std::size_t tap, std::size_t i) {
    const double* x = in + i * g.cin;
    const double* gy = grad_out + o * g.cout;
    double* gw = grad_kernel + tap * tap_stride;
    for (std::size_t ci = 0; ci < g.cin; ++ci) k.axpy(x[ci], gy, gw + ci * g.cout, g.cout);
  });
}

ConvGeometry make_conv_geometry(const std::array<std::size_t, 3>& in,
                                const std::array<std::size_t, 3>& kernel,
                                const std::array<std::size_t, 3>& stride, Padding padding,
                                std::size_t cin, std::size_t cout) {
  ConvGeometry g;
  g.in = in;
  g.kernel = kernel;
  g.stride = stride;
  g.cin = cin;
  g.cout = cout;
  for (int a = 0; a < 3; ++a) {
    g.out[a] = conv_output_extent(in[a], kernel[a], stride[a], padding);
    g.pad[a] = padding == Padding::kSame ? same_padding_before(in[a], kernel[a], stride[a]) : 0;
  }
  return g;
}

Tensor conv_impl(const char* name, const Tensor& input, const Tensor& kernel, ConvGeometry g,
                 Shape out_shape) {
  std::vector<double> out(shape_numel(out_shape), 0.0);
  conv_forward(g, input.values().data(), kernel.values().data(), out.data());
  return Tensor::make_result(name, std::move(out_shape), std::move(out), {input, kernel},
                             [g](Node& self) {
                               Node& px = *self.parents[0];
                               Node& pk = *self.parents[1];
                               if (px.requires_grad) {
                                 conv_input_grad(g, self.grad.data(), pk.value.data(),
                                                 px.grad.data());
                               }
                               if (pk.requires_grad) {
                                 conv_kernel_grad(g, px.value.data(), self.grad.data(),
                                                  pk.grad.data());
                               }
                             });
}

}  // namespace

Tensor conv2d(const Tensor& input, const Tensor& kernel, std::array<std::size_t, 2> stride,
              Padding padding) {
  if (input.rank() != 3 || kernel.rank() != 4) {
    throw ShapeError("conv2d: expected input [H,W,Cin] and kernel [kh,kw,Cin,Cout], got " +
                     shape_to_string(input.shape()) + " and " + shape_to_string(kernel.shape()));
  }
  const auto& is = input.shape();
  const auto& ks = kernel.shape();
  if (is[2] != ks[2]) {
    throw ShapeError("conv2d: input has " + std::to_string(is[2]) + " channels but kernel expects " +
                     std::to_string(ks[2]));
  }
  const ConvGeometry g = make_conv_geometry({1, is[0], is[1]}, {1, ks[0], ks[1]},
                                            {1, stride[0], stride[1]}, padding, ks[2], ks[3]);
  return conv_impl("conv2d", input, kernel, g, Shape{g.out[1], g.out[2], g.cout});
}

Tensor conv3d(const Tensor& input, const Tensor& kernel, std::array<std::size_t, 3> stride,
              Padding padding) {
  if (input.rank() != 4 || kernel.rank() != 5) {
    throw ShapeError("conv3d: expected input [D,H,W,Cin] and kernel [kd,kh,kw,Cin,Cout], got " +
                     shape_to_string(input.shape()) + " and " + shape_to_string(kernel.shape()));
  }
  const auto& is = input.shape();
  const auto& ks = kernel.shape();
  if (is[3] != ks[3]) {
    throw ShapeError("conv3d: input has " + std::to_string(is[3]) + " channels but kernel expects " +
                     std::to_string(ks[3]));
  }
  const ConvGeometry g = make_conv_geometry({is[0], is[1], is[2]}, {ks[0], ks[1], ks[2]}, stride,
                                            padding, ks[3], ks[4]);
  return conv_impl("conv3d", input, kernel, g, Shape{g.out[0], g.out[1], g.out[2], g.cout});
}

Tensor deconv3d(const Tensor& input, const Tensor& kernel, std::array<std::size_t, 3> stride) {
  if (input.rank() != 4 || kernel.rank() != 5) {
    throw ShapeError("deconv3d: expected input [D,H,W,Cin] and kernel [kd,kh,kw,Cout,Cin], got " +
                     shape_to_string(input.shape()) + " and " + shape_to_string(kernel.shape()));
  }
  const auto& is = input.shape();
  const auto& ks = kernel.shape();
  if (is[3] != ks[4]) {
    throw ShapeError("deconv3d: input has " + std::to_string(is[3]) +
                     " channels but kernel expects " + std::to_string(ks[4]));
  }
  // Geometry of the conv3d this op is the adjoint of.
  const std::array<std::size_t, 3> up{is[0] * stride[0], is[1] * stride[1], is[2] * stride[2]};
  const ConvGeometry g = make_conv_geometry(up, {ks[0], ks[1], ks[2]}, stride, Padding::kSame,
                                            ks[3], ks[4]);
  Shape out_shape{up[0], up[1], up[2], ks[3]};
  std::vector<double> out(shape_numel(out_shape), 0.0);
  conv_input_grad(g, input.values().data(), kernel.values().data(), out.data());
  return Tensor::make_result("deconv3d", std::move(out_shape), std::move(out), {input, kernel},
                             [g](Node& self) {
                               Node& px = *self.parents[0];
                               Node& pk = *self.parents[1];
                               if (px.requires_grad) {
                                 conv_forward(g, self.grad.data(), pk.value.data(),
                                              px.grad.data());
                               }
                               if (pk.requires_grad) {
                                 conv_kernel_grad(g, self.grad.data(), px.value.data(),
                                                  pk.grad.data());
                               }
                             });
}

}  // namespace ssc::ad
