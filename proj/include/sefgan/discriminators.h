// sefgan/discriminators.h

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

// Critic ensemble: multi-period discriminators that fold the waveform into a
// [period x L/period] grid, and multi-scale discriminators on the raw and
// average-pooled waveform. Layer shapes follow the HiFi-GAN critic with all
// widths divided by `DiscConfig::width_divisor`.

#ifndef SEFGAN_DISCRIMINATORS_H_
#define SEFGAN_DISCRIMINATORS_H_

#include <vector>

#include <torch/torch.h>

#include "sefgan/config.h"

namespace sefgan {

struct DiscOutput {
  torch::Tensor scores;                // patch decisions, [B, ...]
  std::vector<torch::Tensor> features;  // every intermediate activation
};

enum class ConvNorm { kWeight, kSpectral };

/// 1-D or 2-D convolution whose kernel is reparameterized by weight
/// normalization (g * v / |v|) or divided by its exact spectral norm.
class CriticConvImpl : public torch::nn::Module {
 public:
  struct Options {
    int dims = 1;
    int in = 1;
    int out = 1;
    int kernel = 1;
    int stride = 1;
    int padding = 0;
    int groups = 1;
    ConvNorm norm = ConvNorm::kWeight;
  };

  explicit CriticConvImpl(const Options &opt);
  torch::Tensor forward(const torch::Tensor &x);
  torch::Tensor EffectiveWeight() const;

 private:
  Options opt_;
  torch::Tensor v_, g_, bias_;
};
TORCH_MODULE(CriticConv);

/// [B, N] -> [B, 1, period, ceil(N / period)]. Reflect-pads the tail first;
/// element (r, c) is sample c * period + r.
torch::Tensor FoldForPeriod(const torch::Tensor &audio, int period);

/// k rounds of stride-2 mean pooling, [B, N] -> [B, N / 2^k].
torch::Tensor PoolForScale(const torch::Tensor &audio, int scale);

class PeriodDiscriminatorImpl : public torch::nn::Module {
 public:
  PeriodDiscriminatorImpl(int period, int width_divisor);
  DiscOutput forward(const torch::Tensor &audio);
  int period() const { return period_; }

 private:
  int period_;
  torch::nn::ModuleList convs_;
  CriticConv post_{nullptr};
};
TORCH_MODULE(PeriodDiscriminator);

class ScaleDiscriminatorImpl : public torch::nn::Module {
 public:
  ScaleDiscriminatorImpl(int scale, int width_divisor);
  DiscOutput forward(const torch::Tensor &audio);
  int scale() const { return scale_; }

 private:
  int scale_;
  torch::nn::ModuleList convs_;
  CriticConv post_{nullptr};
};
TORCH_MODULE(ScaleDiscriminator);

/// Ordered [period discriminators by period asc, scale discriminators by
/// scale asc].
class DiscriminatorEnsembleImpl : public torch::nn::Module {
 public:
  explicit DiscriminatorEnsembleImpl(const DiscConfig &cfg);
  std::vector<DiscOutput> forward(const torch::Tensor &audio);
  int size() const { return static_cast<int>(periods_.size() + scales_.size()); }

 private:
  std::vector<PeriodDiscriminator> periods_;
  std::vector<ScaleDiscriminator> scales_;
};
TORCH_MODULE(DiscriminatorEnsemble);

}  // namespace sefgan

#endif  // SEFGAN_DISCRIMINATORS_H_
