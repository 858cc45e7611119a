#include "ssc/train/losses.hpp"

#include <algorithm>
#include <cmath>

#include "ssc/autodiff/ops.hpp"
#include "ssc/errors.hpp"

namespace ssc::train {

double per_voxel_error(double q, double r, double gamma, double clamp) {
  const double qc = std::clamp(q, clamp, 1.0 - clamp);
  return -gamma * r * std::log(qc) - (1.0 - gamma) * (1.0 - r) * std::log(1.0 - qc);
}

ad::Tensor weighted_bce(const ad::Tensor& prob, const ad::Tensor& target, double gamma, double clamp) {
  if (prob.shape() != target.shape()) {
    throw ShapeError("weighted_bce: prediction " + ad::shape_to_string(prob.shape()) + " vs target " +
                     ad::shape_to_string(target.shape()));
  }
  const auto q = prob.values();
  const auto r = target.values();
  std::vector<double> terms(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) terms[i] = per_voxel_error(q[i], r[i], gamma, clamp);
  const double total = ad::accurate_sum(terms);
  if (ad::detail::branch_trace_active()) {
    for (double v : q) ad::detail::trace_branch(v < clamp ? 0 : (v > 1.0 - clamp ? 2 : 1));
  }
  return ad::Tensor::make_result(
      "weighted_bce", {1}, {total}, {prob, target},
      [gamma, clamp](ad::detail::Node& self) {
        ad::detail::Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        const auto& rv = self.parents[1]->value;
        const double g = self.grad[0];
        auto& pg = p.ensure_grad();
        for (std::size_t i = 0; i < p.value.size(); ++i) {
          const double qi = p.value[i];
          if (qi < clamp || qi > 1.0 - clamp) continue;
          pg[i] += g * (-gamma * rv[i] / qi + (1.0 - gamma) * (1.0 - rv[i]) / (1.0 - qi));
        }
      });
}

ad::Tensor loss_recon(const models::ProbVolume& y, const ad::Tensor& one_hot, double gamma,
                      Reduction reduction, double clamp) {
  const ad::Tensor total = weighted_bce(y.value, one_hot, gamma, clamp);
  if (reduction == Reduction::kSum) return total;
  const std::size_t channels = one_hot.shape().back();
  return ad::scale(total, static_cast<double>(channels) / static_cast<double>(one_hot.numel()));
}

ad::Tensor loss_recon(const models::ProbVolume& y, const scene::SemanticVolume& t, double gamma,
                      Reduction reduction, double clamp) {
  return loss_recon(y, t.one_hot(), gamma, reduction, clamp);
}

ad::Tensor loss_gan_gen(const ad::Tensor& d_out, double clamp) {
  return ad::scale(ad::sum(ad::log(ad::clamp(d_out, clamp, 1.0 - clamp))), -1.0);
}

ad::Tensor loss_gan_disc(const ad::Tensor& d_real, const ad::Tensor& d_fake, double clamp) {
  const ad::Tensor real_term = ad::log(ad::clamp(d_real, clamp, 1.0 - clamp));
  const ad::Tensor fake_term =
      ad::log(ad::add_scalar(ad::scale(ad::clamp(d_fake, clamp, 1.0 - clamp), -1.0), 1.0));
  return ad::scale(ad::add(ad::sum(real_term), ad::sum(fake_term)), -1.0);
}

ad::Tensor loss_vae(const models::ProbVolume& y_t, const ad::Tensor& one_hot, const ad::Tensor& mu,
                    const ad::Tensor& logvar, double gamma, double kl_weight, Reduction reduction,
                    double clamp) {
  const ad::Tensor recon = loss_recon(y_t, one_hot, gamma, reduction, clamp);
  if (kl_weight == 0.0) return recon;
  return ad::add(recon, ad::scale(models::kl_divergence(mu, logvar), kl_weight));
}

}  // namespace ssc::train
