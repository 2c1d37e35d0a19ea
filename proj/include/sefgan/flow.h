// sefgan/flow.h

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

// Invertible flow over squeezed waveforms. A flow block is a 1x1 channel
// mixing followed by an affine coupling whose scale/shift come from a
// WaveNet-like subnet of dilated depthwise-separable convolutions. Every
// `early_output_every` blocks a few channels leave the active signal and go
// straight to the latent, which gives the multi-scale structure.
//
// Tensor layout throughout: waveforms [B, N], squeezed signals [B, s, T] with
// T = N / s and h[b, c, t] = x[b, t * s + c].

#ifndef SEFGAN_FLOW_H_
#define SEFGAN_FLOW_H_

#include <utility>
#include <vector>

#include <torch/torch.h>

#include "sefgan/config.h"

namespace sefgan {

enum class Direction { kForward, kInverse };

/// One feature map per flow block, each [B, cond_channels, T].
using CondFeatures = std::vector<torch::Tensor>;

/// Latent produced by the forward pass. `z` is [B, s, T] and stores the early
/// outputs first (in emission order) followed by the channels that survive the
/// last block, so it always holds exactly N values per item. `logdet` is [B]
/// in float64.
struct LatentState {
  torch::Tensor z;
  torch::Tensor logdet;
};

/// Output of a single invertible layer: transformed signal plus the log-det
/// contribution (float64, broadcastable to [B]).
struct LayerOutput {
  torch::Tensor h;
  torch::Tensor logdet;
};

torch::Tensor Squeeze(const torch::Tensor &waveform, int factor);
torch::Tensor Unsqueeze(const torch::Tensor &squeezed);

/// Applies W (or W^-1) to every frame. Throws kNumerical when |det W| < 1e-12.
LayerOutput InvConv(const torch::Tensor &h, const torch::Tensor &weight,
                    Direction dir);

/// WaveNet-like subnet predicting (log_s, t) for the second half of the
/// channels from the first half and the block's conditioning features.
class CouplingSubnetImpl : public torch::nn::Module {
 public:
  CouplingSubnetImpl(int half_channels, const FlowConfig &cfg);

  /// Returns the raw [B, 2 * half, T] output (log_s first, then t).
  torch::Tensor forward(const torch::Tensor &h1, const torch::Tensor &cond);

  torch::nn::Conv1d end() const { return end_; }

 private:
  int channels_;
  int layers_;
  torch::nn::Conv1d start_{nullptr};
  torch::nn::Conv1d end_{nullptr};
  torch::nn::ModuleList depthwise_;
  torch::nn::ModuleList pointwise_;
  torch::nn::ModuleList cond_proj_;
  torch::nn::ModuleList res_skip_;
};
TORCH_MODULE(CouplingSubnet);

/// Affine coupling. The first half of the channels passes through unchanged;
/// the second is scaled by exp(log_s) and shifted by t. `block` only labels
/// errors.
LayerOutput Coupling(const torch::Tensor &h, const torch::Tensor &cond,
                     CouplingSubnet &subnet, Direction dir, double clamp,
                     int block = -1);

class FlowImpl : public torch::nn::Module {
 public:
  explicit FlowImpl(const FlowConfig &cfg);

  /// x: [B, N] with N divisible by the squeeze factor.
  LatentState Forward(const torch::Tensor &x, const CondFeatures &cond);
  /// z: [B, s, T] (or [B, N]); returns the waveform [B, N].
  torch::Tensor Inverse(const torch::Tensor &z, const CondFeatures &cond);

  const FlowConfig &config() const { return cfg_; }
  torch::Tensor mixing(int block) const { return mixing_[block]; }
  CouplingSubnet &subnet(int block) { return subnets_[block]; }

 private:
  void CheckCond(const CondFeatures &cond, int64_t frames) const;

  FlowConfig cfg_;
  std::vector<torch::Tensor> mixing_;
  std::vector<CouplingSubnet> subnets_;
};
TORCH_MODULE(Flow);

/// Random orthogonal matrix with determinant +1.
torch::Tensor RandomRotation(int n);

}  // namespace sefgan

#endif  // SEFGAN_FLOW_H_
