#include "ssc/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ssc/autodiff/ops.hpp"
#include "ssc/errors.hpp"
#include "ssc/train/adam.hpp"
#include "ssc/train/losses.hpp"

namespace ssc::train {
namespace {

struct Prepared {
  ad::Tensor depth;
  ad::Tensor one_hot;
};

std::vector<Prepared> prepare(const models::ArchConfig& arch, std::span<const scene::Sample> batch) {
  if (batch.empty()) throw std::invalid_argument("train_step needs a nonempty batch");
  const scene::Extents3 expected{arch.volume_d, arch.volume_h, arch.volume_w};
  std::vector<Prepared> out;
  for (const scene::Sample& s : batch) {
    if (s.depth.width() != arch.depth_width || s.depth.height() != arch.depth_height) {
      throw ShapeError("depth image is " + std::to_string(s.depth.width()) + "x" +
                       std::to_string(s.depth.height()) + ", architecture expects " +
                       std::to_string(arch.depth_width) + "x" + std::to_string(arch.depth_height));
    }
    if (!(s.volume.extents() == expected) || s.volume.num_categories() != arch.num_categories) {
      throw ShapeError("volume " + scene::to_string(s.volume.extents()) + " with " +
                       std::to_string(s.volume.num_categories()) + " categories does not match architecture " +
                       scene::to_string(expected) + " with " + std::to_string(arch.num_categories));
    }
    out.push_back({s.depth.to_input_tensor(), s.volume.one_hot()});
  }
  return out;
}

void check_finite(const ad::Tensor& loss, const char* name) {
  if (!std::isfinite(loss.item())) {
    throw NumericError(std::string("sub-loss ") + name + " diverged (" + std::to_string(loss.item()) + ")");
  }
}

ad::Tensor accumulate(const ad::Tensor& total, const ad::Tensor& term) {
  return total.defined() ? ad::add(total, term) : term;
}

// Backward on weight * loss, then Adam on the listed sets only.
void apply(const ad::Tensor& loss, double weight, const HyperParams& hp,
           std::initializer_list<ad::ParamSet*> sets) {
  ad::backward(weight == 1.0 ? loss : ad::scale(loss, weight));
  for (ad::ParamSet* p : sets) adam_step(*p, hp);
}

void zero(std::initializer_list<ad::ParamSet*> sets) {
  for (ad::ParamSet* p : sets) p->zero_grad();
}

}  // namespace

std::string loss_log_header() {
  return "step\tloss_recon\tloss_vae\tloss_gan_l_enc\tloss_gan_y_gen\tloss_gan_y_disc\tloss_gan_l_disc"
         "\tupdate_d_vox\tupdate_d_lat\tacc_d_vox\tacc_d_lat";
}

std::string format_record(const StepRecord& r) {
  std::string out = std::to_string(r.step);
  for (double v : {r.loss_recon, r.loss_vae, r.loss_gan_l_enc, r.loss_gan_y_gen, r.loss_gan_y_disc,
                   r.loss_gan_l_disc}) {
    out += '\t';
    out += format_double(v);
  }
  out += r.update_d_vox ? "\t1" : "\t0";
  out += r.update_d_lat ? "\t1" : "\t0";
  out += '\t' + format_double(r.acc_d_vox);
  out += '\t' + format_double(r.acc_d_lat);
  return out;
}

TrainState TrainState::create(const models::ArchConfig& arch, const HyperParams& hp) {
  hp.validate();
  return TrainState{models::Networks::create(arch, hp.seed), hp, 0, 0.0, 0.0, {},
                    Rng(hp.seed ^ 0x9e3779b97f4a7c15ULL)};
}

StepRecord train_step(TrainState& state, std::span<const scene::Sample> batch) {
  models::Networks& n = state.nets;
  const HyperParams& hp = state.hp;
  const std::vector<Prepared> data = prepare(n.config, batch);
  ad::ParamSet* e_dep = &n.e_dep.params();
  ad::ParamSet* e_vox = &n.e_vox.params();
  ad::ParamSet* gen = &n.gen.params();
  ad::ParamSet* d_vox = &n.d_vox.params();
  ad::ParamSet* d_lat = &n.d_lat.params();
  const bool use_vae = hp.weight_vae > 0.0;
  const bool use_gan_y = hp.weight_gan_y > 0.0;
  const bool use_gan_l = hp.weight_gan_l > 0.0;

  StepRecord rec;
  rec.step = state.step;

  // (a) reconstruction over E_dep and G.
  {
    zero({e_dep, gen});
    ad::Tensor loss;
    for (const Prepared& p : data) {
      const models::ProbVolume y = models::generate(n.e_dep.forward(p.depth), n.gen);
      loss = accumulate(loss, loss_recon(y, p.one_hot, hp.gamma, hp.reduction, hp.prob_clamp));
    }
    check_finite(loss, "loss_recon");
    rec.loss_recon = loss.item();
    apply(loss, 1.0, hp, {e_dep, gen});
  }

  // (b) VAE over E_vox and G. The samples feed the latent discriminator in (f).
  std::vector<ad::Tensor> latent_vox;
  if (use_vae || use_gan_l) {
    zero({e_vox, gen});
    ad::Tensor loss;
    for (const Prepared& p : data) {
      const models::VaeLatent z = n.e_vox.forward(p.one_hot, &state.noise);
      latent_vox.push_back(z.sample.value.detach());
      if (!use_vae) continue;
      const models::ProbVolume y = models::generate(z.sample, n.gen);
      loss = accumulate(loss, loss_vae(y, p.one_hot, z.mu, z.logvar, hp.gamma, hp.kl_weight,
                                       hp.reduction, hp.prob_clamp));
    }
    if (use_vae) {
      check_finite(loss, "loss_vae");
      rec.loss_vae = loss.item();
      apply(loss, hp.weight_vae, hp, {e_vox, gen});
    }
  }

  // (c) E_dep against the frozen latent discriminator.
  std::vector<ad::Tensor> latent_dep;
  if (use_gan_l) {
    zero({e_dep, d_lat});
    ad::Tensor loss;
    for (const Prepared& p : data) {
      const models::LatentCode l = n.e_dep.forward(p.depth);
      latent_dep.push_back(l.value.detach());
      loss = accumulate(loss, loss_gan_l_enc(models::disc_lat(l, n.d_lat), hp.prob_clamp));
    }
    check_finite(loss, "loss_gan_l_enc");
    rec.loss_gan_l_enc = loss.item();
    apply(loss, hp.weight_gan_l, hp, {e_dep});
  }

  // (d) E_dep and G against the frozen volume discriminator.
  std::vector<ad::Tensor> predicted;
  if (use_gan_y) {
    zero({e_dep, gen, d_vox});
    ad::Tensor loss;
    for (const Prepared& p : data) {
      const models::ProbVolume y = models::generate(n.e_dep.forward(p.depth), n.gen);
      predicted.push_back(y.value.detach());
      loss = accumulate(loss, loss_gan_y_gen(models::disc_vox(y.value, n.d_vox), hp.prob_clamp));
    }
    check_finite(loss, "loss_gan_y_gen");
    rec.loss_gan_y_gen = loss.item();
    apply(loss, hp.weight_gan_y, hp, {e_dep, gen});
  }

  // (e), (f): gated discriminator updates on detached inputs.
  auto discriminator_update = [&](ad::ParamSet* params, const std::vector<ad::Tensor>& real,
                                  const std::vector<ad::Tensor>& fake, auto&& disc, double weight,
                                  const char* name, double& loss_out, double& acc_out, bool& update_out) {
    zero({params});
    ad::Tensor loss;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < real.size(); ++i) {
      const ad::Tensor d_real = disc(real[i]);
      const ad::Tensor d_fake = disc(fake[i]);
      correct += d_real.item() >= 0.5 ? 1 : 0;
      correct += d_fake.item() < 0.5 ? 1 : 0;
      loss = accumulate(loss, loss_gan_disc(d_real, d_fake, hp.prob_clamp));
    }
    check_finite(loss, name);
    loss_out = loss.item();
    acc_out = static_cast<double>(correct) / static_cast<double>(2 * real.size());
    update_out = disc_gate(acc_out, hp.gate_tau, hp.gate_rule);
    if (update_out) apply(loss, weight, hp, {params});
  };

  if (use_gan_y) {
    std::vector<ad::Tensor> real;
    for (const Prepared& p : data) real.push_back(p.one_hot);
    discriminator_update(
        d_vox, real, predicted, [&](const ad::Tensor& v) { return n.d_vox.forward(v); }, hp.weight_gan_y,
        "loss_gan_y_disc", rec.loss_gan_y_disc, rec.acc_d_vox, rec.update_d_vox);
    state.acc_d_vox = rec.acc_d_vox;
  }
  if (use_gan_l) {
    discriminator_update(
        d_lat, latent_vox, latent_dep, [&](const ad::Tensor& l) { return n.d_lat.forward(l); },
        hp.weight_gan_l, "loss_gan_l_disc", rec.loss_gan_l_disc, rec.acc_d_lat, rec.update_d_lat);
    state.acc_d_lat = rec.acc_d_lat;
  }

  ++state.step;
  state.history.push_back(rec);
  return rec;
}

models::Checkpoint make_checkpoint(const TrainState& state, const std::string& config_text) {
  models::Checkpoint ckpt;
  ckpt.config_text = config_text;
  models::store_networks(ckpt, state.nets);
  ckpt.tensors.push_back({"state/step", {1}, {static_cast<double>(state.step)}});
  ckpt.tensors.push_back({"state/acc_d_vox", {1}, {state.acc_d_vox}});
  ckpt.tensors.push_back({"state/acc_d_lat", {1}, {state.acc_d_lat}});
  return ckpt;
}

void restore_checkpoint(const models::Checkpoint& ckpt, TrainState& state) {
  models::restore_networks(ckpt, state.nets);
  state.step = static_cast<std::size_t>(ckpt.require("state/step", {1}).values[0]);
  state.acc_d_vox = ckpt.require("state/acc_d_vox", {1}).values[0];
  state.acc_d_lat = ckpt.require("state/acc_d_lat", {1}).values[0];
}

TrainState train(const RunConfig& config, std::span<const scene::Sample> train_set,
                 const TrainOptions& options) {
  if (train_set.empty()) throw std::invalid_argument("training set is empty");
  TrainState state = TrainState::create(config.arch, config.train);
  const std::string config_text = config.canonical();

  std::ofstream log;
  if (!options.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    std::ofstream snapshot(options.out_dir / "config.txt");
    snapshot << config_text;
    log.open(options.out_dir / "losses.tsv");
    if (!snapshot || !log) {
      throw FormatError(FormatError::Kind::kIo, "cannot write to " + options.out_dir.string());
    }
    log << loss_log_header() << '\n';
  }

  Rng order_rng(config.train.seed);
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t cursor = order.size();
  const std::size_t batch_size = std::min(config.train.batch_size, train_set.size());
  std::vector<scene::Sample> batch;

  for (std::size_t s = 0; s < config.train.total_steps; ++s) {
    batch.clear();
    while (batch.size() < batch_size) {
      if (cursor == order.size()) {
        order_rng.shuffle(order.begin(), order.end());
        cursor = 0;
      }
      batch.push_back(train_set[order[cursor++]]);
    }
    const StepRecord rec = train_step(state, batch);
    if (log.is_open()) log << format_record(rec) << '\n';
    if (options.on_step) options.on_step(rec);
    const std::size_t every = config.train.checkpoint_every;
    if (!options.out_dir.empty() && every > 0 && state.step % every == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "step_%06zu.ckpt", state.step);
      models::save_checkpoint(options.out_dir / name, make_checkpoint(state, config_text));
    }
  }
  if (!options.out_dir.empty()) {
    models::save_checkpoint(options.out_dir / "final.ckpt", make_checkpoint(state, config_text));
  }
  return state;
}

}  // namespace ssc::train
