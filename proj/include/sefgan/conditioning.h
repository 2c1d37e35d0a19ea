// sefgan/conditioning.h

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

#ifndef SEFGAN_CONDITIONING_H_
#define SEFGAN_CONDITIONING_H_

#include <vector>

#include <torch/torch.h>

#include "sefgan/config.h"
#include "sefgan/flow.h"

namespace sefgan {

/// tanh(a_h + a_c) * sigmoid(b_h + b_c), where (a, b) are the two channel
/// halves. Both inputs are [B, 2C, T]; the result is [B, C, T].
torch::Tensor GatedInjection(const torch::Tensor &hidden,
                             const torch::Tensor &cond);

/// Stride-1 convolutional encoder over the squeezed noisy signal. Layer i
/// (1-based) has growth * i output channels; every layer output is mapped to
/// cond_channels by its own 1x1 cond block.
class CondNetImpl : public torch::nn::Module {
 public:
  CondNetImpl(const CondNetConfig &cfg, int in_channels, int cond_channels);

  /// All encoder layer outputs, layer i shaped [B, growth * (i + 1), T].
  std::vector<torch::Tensor> Encode(const torch::Tensor &y_squeezed);
  /// Maps one encoder output through cond block `layer`.
  torch::Tensor CondBlock(int layer, const torch::Tensor &feature);
  CondFeatures forward(const torch::Tensor &y_squeezed);

 private:
  CondNetConfig cfg_;
  torch::nn::ModuleList encoder_;
  torch::nn::ModuleList blocks_;
};
TORCH_MODULE(CondNet);

/// Reference conditioning: an independent depthwise-separable layer per flow
/// block, no information shared between blocks.
class BaselineCondImpl : public torch::nn::Module {
 public:
  BaselineCondImpl(int n_blocks, int in_channels, int cond_channels,
                   int kernel);

  CondFeatures forward(const torch::Tensor &y_squeezed);

 private:
  torch::nn::ModuleList depthwise_;
  torch::nn::ModuleList pointwise_;
};
TORCH_MODULE(BaselineCond);

}  // namespace sefgan

#endif  // SEFGAN_CONDITIONING_H_
