#pragma once

#include "ssc/autodiff/tensor.hpp"
#include "ssc/models/networks.hpp"
#include "ssc/scene/volume.hpp"
#include "ssc/train/hyper_params.hpp"

namespace ssc::train {

inline constexpr double kProbClamp = 1e-7;

// -gamma * r * log(q) - (1 - gamma) * (1 - r) * log(1 - q), q clamped to [clamp, 1 - clamp].
double per_voxel_error(double q, double r, double gamma, double clamp = kProbClamp);

// Sum of per_voxel_error over every element of `prob` against the matching
// element of `target` (a constant). Gradient is zero where q was clamped.
ad::Tensor weighted_bce(const ad::Tensor& prob, const ad::Tensor& target, double gamma,
                        double clamp = kProbClamp);

// Sum over categories and voxels; kMean divides by the voxel count.
ad::Tensor loss_recon(const models::ProbVolume& y, const ad::Tensor& one_hot, double gamma,
                      Reduction reduction = Reduction::kSum, double clamp = kProbClamp);
ad::Tensor loss_recon(const models::ProbVolume& y, const scene::SemanticVolume& t, double gamma,
                      Reduction reduction = Reduction::kSum, double clamp = kProbClamp);

// -log(d_out)
ad::Tensor loss_gan_gen(const ad::Tensor& d_out, double clamp = kProbClamp);
// -log(d_real) - log(1 - d_fake)
ad::Tensor loss_gan_disc(const ad::Tensor& d_real, const ad::Tensor& d_fake, double clamp = kProbClamp);

inline ad::Tensor loss_gan_y_gen(const ad::Tensor& d_out, double clamp = kProbClamp) {
  return loss_gan_gen(d_out, clamp);
}
inline ad::Tensor loss_gan_y_disc(const ad::Tensor& d_real, const ad::Tensor& d_fake,
                                  double clamp = kProbClamp) {
  return loss_gan_disc(d_real, d_fake, clamp);
}
inline ad::Tensor loss_gan_l_enc(const ad::Tensor& d_out, double clamp = kProbClamp) {
  return loss_gan_gen(d_out, clamp);
}
inline ad::Tensor loss_gan_l_disc(const ad::Tensor& d_real_on_lvox, const ad::Tensor& d_fake_on_ldep,
                                  double clamp = kProbClamp) {
  return loss_gan_disc(d_real_on_lvox, d_fake_on_ldep, clamp);
}

// loss_recon(y_t, t) + kl_weight * KL(mu, logvar)
ad::Tensor loss_vae(const models::ProbVolume& y_t, const ad::Tensor& one_hot, const ad::Tensor& mu,
                    const ad::Tensor& logvar, double gamma, double kl_weight,
                    Reduction reduction = Reduction::kSum, double clamp = kProbClamp);

}  // namespace ssc::train
