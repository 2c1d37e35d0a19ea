// sefgan/losses.h

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

#ifndef SEFGAN_LOSSES_H_
#define SEFGAN_LOSSES_H_

#include <map>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "sefgan/config.h"

namespace sefgan {

struct DiscOutput;

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

/// Per-dimension negative log-likelihood under a standard Gaussian prior:
/// [0.5 * (|z|^2 + N ln 2pi) - logdet] / N, one value per batch item.
/// z is [B, ...] (N = numel per item), logdet is [B]. Result is float64.
torch::Tensor NllLoss(const torch::Tensor &z, const torch::Tensor &logdet);

struct AdvLosses {
  torch::Tensor adv_d;
  torch::Tensor adv_g;
};

/// Least-squares adversarial terms for one discriminator.
AdvLosses LsganLosses(const torch::Tensor &real_scores,
                      const torch::Tensor &fake_scores);

/// Mean absolute feature difference averaged over layers, then over
/// discriminators.
torch::Tensor FeatureMatching(const std::vector<DiscOutput> &real,
                              const std::vector<DiscOutput> &fake);

struct StftTerms {
  torch::Tensor spectral_convergence;
  torch::Tensor log_magnitude;
};

/// Both mrstft terms, each averaged over resolutions.
StftTerms MrStftTerms(const torch::Tensor &ref, const torch::Tensor &est,
                      const std::vector<StftResolution> &resolutions,
                      double log_floor = 1e-7);

/// Spectral convergence plus log-magnitude L1, averaged over resolutions.
/// Inputs are [B, N] or [N]; the computation runs in the input dtype.
torch::Tensor MrStft(const torch::Tensor &ref, const torch::Tensor &est,
                     const std::vector<StftResolution> &resolutions,
                     double log_floor = 1e-7);

/// Log-mel L1 distance (80 bands, first resolution's framing).
torch::Tensor MelDistance(const torch::Tensor &ref, const torch::Tensor &est,
                          const StftResolution &res, double log_floor = 1e-7);

/// Negative SI-SDR in dB, batch mean. Differentiable variant of the metric.
torch::Tensor NegSiSdrLoss(const torch::Tensor &ref, const torch::Tensor &est);

/// Itemized loss. `total` is always the weighted sum of `components` with
/// the weights recorded in `weights` (missing weight == 1).
struct LossReport {
  torch::Tensor total;
  std::map<std::string, torch::Tensor> components;
  std::map<std::string, double> weights;

  double Value(const std::string &name) const;
  std::map<std::string, double> Values() const;
};

/// Sum over discriminators of the generator adversarial term, plus weighted
/// feature matching and reconstruction.
LossReport GeneratorLoss(const std::vector<DiscOutput> &disc_real,
                         const std::vector<DiscOutput> &disc_fake,
                         const torch::Tensor &ref, const torch::Tensor &est,
                         const LossConfig &cfg);

/// Sum of per-discriminator adv_d terms.
torch::Tensor DiscriminatorLoss(const std::vector<DiscOutput> &real,
                                const std::vector<DiscOutput> &fake);

torch::Tensor HybridLoss(const LossReport &generator,
                         const torch::Tensor &nll, double lambda);

}  // namespace sefgan

#endif  // SEFGAN_LOSSES_H_
