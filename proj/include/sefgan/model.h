// sefgan/model.h

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

#ifndef SEFGAN_MODEL_H_
#define SEFGAN_MODEL_H_

#include <cstdint>

#include <torch/torch.h>

#include "sefgan/conditioning.h"
#include "sefgan/config.h"
#include "sefgan/flow.h"

namespace sefgan {

/// Conditional flow generator: conditioning network plus invertible flow.
/// Forward maps (clean, noisy) to a latent; Inverse maps (latent, noisy) to an
/// enhanced waveform.
class EnhancerImpl : public torch::nn::Module {
 public:
  explicit EnhancerImpl(const ModelConfig &cfg);

  /// y: [B, N], N divisible by the squeeze factor. One map per flow block.
  CondFeatures BuildCondStack(const torch::Tensor &y);

  LatentState Forward(const torch::Tensor &x, const CondFeatures &cond);
  LatentState Forward(const torch::Tensor &x, const torch::Tensor &y);
  torch::Tensor Inverse(const torch::Tensor &z, const CondFeatures &cond);
  torch::Tensor Inverse(const torch::Tensor &z, const torch::Tensor &y);

  /// Per-item NLL in nats per dimension, [B] float64.
  torch::Tensor LogLikelihood(const torch::Tensor &x, const torch::Tensor &y);

  const ModelConfig &config() const { return cfg_; }
  Flow &flow() { return flow_; }
  int squeeze_factor() const { return cfg_.flow.squeeze_factor; }

 private:
  ModelConfig cfg_;
  Flow flow_{nullptr};
  CondNet condnet_{nullptr};
  BaselineCond baseline_{nullptr};
};
TORCH_MODULE(Enhancer);

int64_t ParameterCount(const torch::nn::Module &module);

/// Re-draws every parameter as N(0, std^2) (1x1 mixing matrices become random
/// rotations scaled by a random diagonal) so that no layer is an identity.
void RandomizeParameters(torch::nn::Module &module, double std, uint64_t seed);

}  // namespace sefgan

#endif  // SEFGAN_MODEL_H_
