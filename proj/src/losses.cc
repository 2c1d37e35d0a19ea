// src/losses.cc

// Copyright 2026 The SEFGAN Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sefgan/losses.h"

#include <cmath>

#include "sefgan/audio.h"
#include "sefgan/discriminators.h"
#include "sefgan/error.h"

namespace sefgan {

namespace {

void CheckFinite(const torch::Tensor &t, const char *what) {
  if (!torch::isfinite(t).all().item<bool>())
    Fail(ErrorKind::kNumerical, std::string("non-finite value in ") + what);
}

// Magnitude spectrogram [B, F, frames]. Frames are centred: the signal is
// zero padded by fft/2 on both sides, hops start at 0, and the periodic Hann
// window of `window_length` sits in the middle of the fft frame. Magnitudes
// are floored at `floor` so the log and its gradient stay finite.
torch::Tensor Magnitude(const torch::Tensor &x, const StftResolution &r,
                        double floor) {
  auto window = torch::hann_window(r.window_length, /*periodic=*/true,
                                   x.options());
  auto spec = torch::stft(x, r.fft_size, r.hop, r.window_length, window,
                          /*center=*/true, /*pad_mode=*/"constant",
                          /*normalized=*/false, /*onesided=*/true,
                          /*return_complex=*/true);
  auto power = torch::real(spec).square() + torch::imag(spec).square();
  return torch::sqrt(torch::clamp_min(power, floor * floor));
}

torch::Tensor AsBatch(const torch::Tensor &x) {
  return x.dim() == 1 ? x.unsqueeze(0) : x;
}

// Triangular mel filterbank [bands, fft/2 + 1] (HTK mel scale).
torch::Tensor MelBank(int fft_size, int bands, torch::TensorOptions opts) {
  auto hz_to_mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto mel_to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const int bins = fft_size / 2 + 1;
  const double top = hz_to_mel(kSampleRate / 2.0);
  std::vector<double> edges(bands + 2);
  for (int i = 0; i < bands + 2; ++i)
    edges[i] = mel_to_hz(top * i / (bands + 1));
  auto bank = torch::zeros({bands, bins}, torch::kFloat64);
  auto acc = bank.accessor<double, 2>();
  for (int m = 0; m < bands; ++m)
    for (int k = 0; k < bins; ++k) {
      double f = static_cast<double>(kSampleRate) * k / fft_size;
      double up = (f - edges[m]) / (edges[m + 1] - edges[m]);
      double down = (edges[m + 2] - f) / (edges[m + 2] - edges[m + 1]);
      acc[m][k] = std::max(0.0, std::min(up, down));
    }
  return bank.to(opts);
}

}  // namespace

torch::Tensor NllLoss(const torch::Tensor &z, const torch::Tensor &logdet) {
  auto z64 = z.to(torch::kFloat64).reshape({z.size(0), -1});
  const double n = static_cast<double>(z64.size(1));
  auto quad = 0.5 * z64.square().sum(1);
  auto nll = (quad + n * kHalfLog2Pi - logdet.to(torch::kFloat64)) / n;
  CheckFinite(nll, "nll");
  return nll;
}

AdvLosses LsganLosses(const torch::Tensor &real, const torch::Tensor &fake) {
  return {(real - 1).square().mean() + fake.square().mean(),
          (fake - 1).square().mean()};
}

torch::Tensor FeatureMatching(const std::vector<DiscOutput> &real,
                              const std::vector<DiscOutput> &fake) {
  if (real.size() != fake.size() || real.empty())
    Fail(ErrorKind::kConfig, "feature matching needs parallel, non-empty "
                             "discriminator outputs");
  torch::Tensor total;
  for (size_t k = 0; k < real.size(); ++k) {
    const auto &rf = real[k].features;
    const auto &ff = fake[k].features;
    if (rf.size() != ff.size() || rf.empty())
      Fail(ErrorKind::kConfig, "feature matching layer count mismatch at "
                               "discriminator " + std::to_string(k));
    torch::Tensor per_disc;
    for (size_t l = 0; l < rf.size(); ++l) {
      if (rf[l].sizes() != ff[l].sizes())
        Fail(ErrorKind::kConfig, "feature matching shape mismatch");
      auto d = (rf[l] - ff[l]).abs().mean();
      per_disc = per_disc.defined() ? per_disc + d : d;
    }
    per_disc = per_disc / static_cast<double>(rf.size());
    total = total.defined() ? total + per_disc : per_disc;
  }
  return total / static_cast<double>(real.size());
}

StftTerms MrStftTerms(const torch::Tensor &ref_in, const torch::Tensor &est_in,
                      const std::vector<StftResolution> &resolutions,
                      double log_floor) {
  auto ref = AsBatch(ref_in);
  auto est = AsBatch(est_in);
  if (ref.sizes() != est.sizes())
    Fail(ErrorKind::kShape, "mrstft inputs differ in shape");
  if (resolutions.empty()) Fail(ErrorKind::kConfig, "no STFT resolutions");
  StftTerms out;
  for (const auto &r : resolutions) {
    auto ref_mag = Magnitude(ref, r, 0.0);
    auto ref_norm = ref_mag.norm();
    if (ref_norm.item<double>() == 0.0)
      Fail(ErrorKind::kDegenerate, "mrstft reference is silent");
    ref_mag = torch::clamp_min(ref_mag, log_floor);
    auto est_mag = Magnitude(est, r, log_floor);
    auto sc = (ref_mag - est_mag).norm() / ref_norm;
    auto mag = (torch::log(ref_mag) - torch::log(est_mag)).abs().mean();
    out.spectral_convergence =
        out.spectral_convergence.defined() ? out.spectral_convergence + sc : sc;
    out.log_magnitude = out.log_magnitude.defined() ? out.log_magnitude + mag : mag;
  }
  const double n = static_cast<double>(resolutions.size());
  out.spectral_convergence = out.spectral_convergence / n;
  out.log_magnitude = out.log_magnitude / n;
  return out;
}

torch::Tensor MrStft(const torch::Tensor &ref, const torch::Tensor &est,
                     const std::vector<StftResolution> &resolutions,
                     double log_floor) {
  auto t = MrStftTerms(ref, est, resolutions, log_floor);
  return t.spectral_convergence + t.log_magnitude;
}

torch::Tensor MelDistance(const torch::Tensor &ref_in,
                          const torch::Tensor &est_in,
                          const StftResolution &res, double log_floor) {
  auto ref = AsBatch(ref_in);
  auto est = AsBatch(est_in);
  auto bank = MelBank(res.fft_size, 80, ref.options());
  auto mel_ref = torch::matmul(bank, Magnitude(ref, res, log_floor));
  auto mel_est = torch::matmul(bank, Magnitude(est, res, log_floor));
  return (torch::log(torch::clamp_min(mel_ref, log_floor)) -
          torch::log(torch::clamp_min(mel_est, log_floor)))
      .abs()
      .mean();
}

torch::Tensor NegSiSdrLoss(const torch::Tensor &ref_in,
                           const torch::Tensor &est_in) {
  auto ref = AsBatch(ref_in);
  auto est = AsBatch(est_in);
  const double eps = 1e-8;
  auto alpha = (est * ref).sum(1, true) / (ref.square().sum(1, true) + eps);
  auto target = alpha * ref;
  auto residual = est - target;
  auto ratio = (target.square().sum(1) + eps) / (residual.square().sum(1) + eps);
  return -(10.0 * torch::log10(ratio)).mean();
}

double LossReport::Value(const std::string &name) const {
  auto it = components.find(name);
  if (it == components.end()) return 0.0;
  return it->second.item<double>();
}

std::map<std::string, double> LossReport::Values() const {
  std::map<std::string, double> v;
  for (const auto &[k, t] : components) v[k] = t.item<double>();
  v["total"] = total.item<double>();
  return v;
}

LossReport GeneratorLoss(const std::vector<DiscOutput> &disc_real,
                         const std::vector<DiscOutput> &disc_fake,
                         const torch::Tensor &ref, const torch::Tensor &est,
                         const LossConfig &cfg) {
  if (disc_real.size() != disc_fake.size())
    Fail(ErrorKind::kConfig, "generator loss: discriminator count mismatch");
  LossReport rep;
  torch::Tensor adv;
  for (size_t k = 0; k < disc_fake.size(); ++k) {
    auto a = LsganLosses(disc_real[k].scores, disc_fake[k].scores).adv_g;
    adv = adv.defined() ? adv + a : a;
  }
  auto fm = FeatureMatching(disc_real, disc_fake);
  torch::Tensor rec;
  std::string rec_name = "mrstft";
  switch (cfg.recon) {
    case ReconLoss::kMrStft:
      rec = MrStft(ref, est, cfg.resolutions, cfg.log_floor);
      break;
    case ReconLoss::kMel:
      rec_name = "mel";
      rec = MelDistance(ref, est, cfg.resolutions.front(), cfg.log_floor);
      break;
    case ReconLoss::kSiSdr:
      rec_name = "sisdr";
      rec = NegSiSdrLoss(ref, est);
      break;
  }
  rep.components["adv_g"] = adv;
  rep.components["fm"] = fm;
  rep.components[rec_name] = rec;
  rep.weights["adv_g"] = 1.0;
  rep.weights["fm"] = cfg.lambda_fm;
  rep.weights[rec_name] = cfg.lambda_rec;
  rep.total = adv + cfg.lambda_fm * fm + cfg.lambda_rec * rec;
  CheckFinite(rep.total, "generator loss");
  return rep;
}

torch::Tensor DiscriminatorLoss(const std::vector<DiscOutput> &real,
                                const std::vector<DiscOutput> &fake) {
  if (real.size() != fake.size() || real.empty())
    Fail(ErrorKind::kConfig, "discriminator loss: expected matching outputs, "
                             "got " + std::to_string(real.size()) + " real / " +
                             std::to_string(fake.size()) + " fake");
  torch::Tensor total;
  for (size_t k = 0; k < real.size(); ++k) {
    auto d = LsganLosses(real[k].scores, fake[k].scores).adv_d;
    total = total.defined() ? total + d : d;
  }
  return total;
}

torch::Tensor HybridLoss(const LossReport &generator, const torch::Tensor &nll,
                         double lambda) {
  return generator.total + lambda * nll.to(generator.total.scalar_type());
}

}  // namespace sefgan
