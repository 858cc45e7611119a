#include "ssc/autodiff/ops.hpp"

#include <cmath>

#include "ssc/errors.hpp"
#include "ssc/simd/kernels.hpp"

namespace ssc::ad {
namespace {

using detail::Node;

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_to_string(a.shape()) + " vs " +
                     shape_to_string(b.shape()));
  }
}

// Unary elementwise op with derivative computed from (input, output).
template <typename Fwd, typename Deriv>
Tensor unary(const char* name, const Tensor& x, Fwd fwd, Deriv deriv) {
  const auto in = x.values();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fwd(in[i]);
  return Tensor::make_result(name, x.shape(), std::move(out), {x}, [deriv](Node& self) {
    Node& p = *self.parents[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      p.grad[i] += self.grad[i] * deriv(p.value[i], self.value[i]);
    }
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i) + b.at(i);
  return Tensor::make_result("add", a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (const auto& p : self.parents) {
      if (!p->requires_grad) continue;
      for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i) - b.at(i);
  return Tensor::make_result("sub", a.shape(), std::move(out), {a, b}, [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (pa.requires_grad) pa.grad[i] += self.grad[i];
      if (pb.requires_grad) pb.grad[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i) * b.at(i);
  return Tensor::make_result("mul", a.shape(), std::move(out), {a, b}, [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (pa.requires_grad) pa.grad[i] += self.grad[i] * pb.value[i];
      if (pb.requires_grad) pb.grad[i] += self.grad[i] * pa.value[i];
    }
  });
}

Tensor scale(const Tensor& x, double factor) {
  return unary("scale", x, [factor](double v) { return v * factor; },
               [factor](double, double) { return factor; });
}

Tensor add_scalar(const Tensor& x, double offset) {
  return unary("add_scalar", x, [offset](double v) { return v + offset; },
               [](double, double) { return 1.0; });
}

Tensor exp(const Tensor& x) {
  return unary("exp", x, [](double v) { return std::exp(v); },
               [](double, double y) { return y; });
}

Tensor log(const Tensor& x) {
  return unary("log", x, [](double v) { return std::log(v); },
               [](double v, double) { return 1.0 / v; });
}

Tensor clamp(const Tensor& x, double lo, double hi) {
  if (detail::branch_trace_active()) {
    for (double v : x.values()) detail::trace_branch(v < lo ? 0 : (v > hi ? 2 : 1));
  }
  return unary("clamp", x, [lo, hi](double v) { return v < lo ? lo : (v > hi ? hi : v); },
               [lo, hi](double v, double) { return (v < lo || v > hi) ? 0.0 : 1.0; });
}

double accurate_sum(std::span<const double> values) {
  double acc = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = acc + v;
    carry += std::abs(acc) >= std::abs(v) ? (acc - t) + v : (v - t) + acc;
    acc = t;
  }
  return acc + carry;
}

Tensor sum(const Tensor& x) {
  return Tensor::make_result("sum", Shape{1}, {accurate_sum(x.values())}, {x}, [](Node& self) {
    Node& p = *self.parents[0];
    const double g = self.grad[0];
    for (double& pg : p.grad) pg += g;
  });
}

Tensor mean(const Tensor& x) { return scale(sum(x), 1.0 / static_cast<double>(x.numel())); }

Tensor activation(const Tensor& x, Activation act) {
  if (act.kind != Activation::Kind::kSigmoid && detail::branch_trace_active()) {
    for (double v : x.values()) detail::trace_branch(v >= 0.0 ? 1 : 0);
  }
  switch (act.kind) {
    case Activation::Kind::kLeakyRelu: {
      const double alpha = act.alpha;
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("leaky_relu slope must lie in (0, 1)");
      }
      return unary("leaky_relu", x, [alpha](double v) { return v >= 0.0 ? v : alpha * v; },
                   [alpha](double v, double) { return v >= 0.0 ? 1.0 : alpha; });
    }
    case Activation::Kind::kRelu:
      return unary("relu", x, [](double v) { return v < 0.0 ? 0.0 : v; },
                   [](double v, double) { return v >= 0.0 ? 1.0 : 0.0; });
    case Activation::Kind::kSigmoid:
      return unary("sigmoid", x,
                   [](double v) {
                     if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
                     const double e = std::exp(v);
                     return e / (1.0 + e);
                   },
                   [](double, double y) { return y * (1.0 - y); });
  }
  throw std::invalid_argument("unknown activation");
}

Tensor reshape(const Tensor& x, Shape new_shape) {
  if (shape_numel(new_shape) != x.numel()) {
    throw ShapeError("reshape: cannot view " + shape_to_string(x.shape()) + " as " +
                     shape_to_string(new_shape));
  }
  std::vector<double> out(x.values().begin(), x.values().end());
  return Tensor::make_result("reshape", std::move(new_shape), std::move(out), {x}, [](Node& self) {
    Node& p = *self.parents[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) p.grad[i] += self.grad[i];
  });
}

Tensor slice_last_axis(const Tensor& x, std::size_t begin, std::size_t end) {
  if (x.rank() == 0 || begin >= end || end > x.shape().back()) {
    throw ShapeError("slice_last_axis: bad range [" + std::to_string(begin) + ", " +
                     std::to_string(end) + ") for " + shape_to_string(x.shape()));
  }
  const std::size_t channels = x.shape().back();
  const std::size_t width = end - begin;
  const std::size_t outer = x.numel() / channels;
  Shape shape = x.shape();
  shape.back() = width;
  std::vector<double> out(outer * width);
  const auto in = x.values();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t c = 0; c < width; ++c) out[o * width + c] = in[o * channels + begin + c];
  }
  return Tensor::make_result(
      "slice_last_axis", std::move(shape), std::move(out), {x},
      [outer, width, channels, begin](Node& self) {
        Node& p = *self.parents[0];
        for (std::size_t o = 0; o < outer; ++o) {
          for (std::size_t c = 0; c < width; ++c) {
            p.grad[o * channels + begin + c] += self.grad[o * width + c];
          }
        }
      });
}

Tensor add_channel_bias(const Tensor& x, const Tensor& bias) {
  if (bias.rank() != 1 || x.rank() == 0 || bias.shape()[0] != x.shape().back()) {
    throw ShapeError("add_channel_bias: bias " + shape_to_string(bias.shape()) +
                     " does not match channels of " + shape_to_string(x.shape()));
  }
  const std::size_t channels = bias.numel();
  const std::size_t outer = x.numel() / channels;
  std::vector<double> out(x.values().begin(), x.values().end());
  const auto b = bias.values();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t c = 0; c < channels; ++c) out[o * channels + c] += b[c];
  }
  return Tensor::make_result("add_channel_bias", x.shape(), std::move(out), {x, bias},
                             [outer, channels](Node& self) {
                               Node& px = *self.parents[0];
                               Node& pb = *self.parents[1];
                               if (px.requires_grad) {
                                 for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                   px.grad[i] += self.grad[i];
                                 }
                               }
                               if (pb.requires_grad) {
                                 for (std::size_t o = 0; o < outer; ++o) {
                                   for (std::size_t c = 0; c < channels; ++c) {
                                     pb.grad[c] += self.grad[o * channels + c];
                                   }
                                 }
                               }
                             });
}

Tensor dense(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  if (input.rank() != 1 || weights.rank() != 2 || bias.rank() != 1 ||
      weights.shape()[0] != input.numel() || weights.shape()[1] != bias.numel()) {
    throw ShapeError("dense: incompatible shapes input " + shape_to_string(input.shape()) +
                     ", weights " + shape_to_string(weights.shape()) + ", bias " +
                     shape_to_string(bias.shape()));
  }
  const std::size_t n = input.numel();
  const std::size_t m = bias.numel();
  const auto& k = simd::kernels();
  std::vector<double> out(bias.values().begin(), bias.values().end());
  const double* w = weights.values().data();
  const auto x = input.values();
  for (std::size_t i = 0; i < n; ++i) k.axpy(x[i], w + i * m, out.data(), m);
  return Tensor::make_result("dense", Shape{m}, std::move(out), {input, weights, bias},
                             [n, m](Node& self) {
                               const auto& k = simd::kernels();
                               Node& px = *self.parents[0];
                               Node& pw = *self.parents[1];
                               Node& pb = *self.parents[2];
                               const double* gy = self.grad.data();
                               if (px.requires_grad) {
                                 for (std::size_t i = 0; i < n; ++i) {
                                   px.grad[i] += k.dot(pw.value.data() + i * m, gy, m);
                                 }
                               }
                               if (pw.requires_grad) {
                                 for (std::size_t i = 0; i < n; ++i) {
                                   k.axpy(px.value[i], gy, pw.grad.data() + i * m, m);
                                 }
                               }
                               if (pb.requires_grad) {
                                 for (std::size_t j = 0; j < m; ++j) pb.grad[j] += gy[j];
                               }
                             });
}

Tensor maxpool2d(const Tensor& input) {
  if (input.rank() != 3 || input.shape()[0] < 2 || input.shape()[1] < 2) {
    throw ShapeError("maxpool2d: expected [H>=2, W>=2, C], got " + shape_to_string(input.shape()));
  }
  const std::size_t h = input.shape()[0];
  const std::size_t w = input.shape()[1];
  const std::size_t c = input.shape()[2];
  const std::size_t oh = pool_output_extent(h);
  const std::size_t ow = pool_output_extent(w);
  const auto in = input.values();
  std::vector<double> out(oh * ow * c);
  std::vector<std::size_t> argmax(out.size());
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t q = 0; q < ow; ++q) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        std::size_t best = ((2 * r) * w + 2 * q) * c + ch;
        for (std::size_t dr = 0; dr < 2; ++dr) {
          for (std::size_t dq = 0; dq < 2; ++dq) {
            const std::size_t idx = ((2 * r + dr) * w + (2 * q + dq)) * c + ch;
            if (in[idx] > in[best]) best = idx;
          }
        }
        const std::size_t o = (r * ow + q) * c + ch;
        out[o] = in[best];
        argmax[o] = best;
        if (detail::branch_trace_active()) detail::trace_branch(best);
      }
    }
  }
  return Tensor::make_result("maxpool2d", Shape{oh, ow, c}, std::move(out), {input},
                             [argmax = std::move(argmax)](Node& self) {
                               Node& p = *self.parents[0];
                               for (std::size_t o = 0; o < self.grad.size(); ++o) {
                                 p.grad[argmax[o]] += self.grad[o];
                               }
                             });
}

}  // namespace ssc::ad
