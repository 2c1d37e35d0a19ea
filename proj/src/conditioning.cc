// src/conditioning.cc

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

#include "sefgan/conditioning.h"

#include "sefgan/error.h"

namespace sefgan {

namespace nn = torch::nn;

namespace {

nn::Conv1d ZeroBiasConv(int in, int out, int kernel, int groups = 1) {
  nn::Conv1d conv(nn::Conv1dOptions(in, out, kernel)
                      .padding(kernel / 2)
                      .groups(groups));
  torch::NoGradGuard guard;
  conv->bias.zero_();
  return conv;
}

}  // namespace

torch::Tensor GatedInjection(const torch::Tensor &hidden,
                             const torch::Tensor &cond) {
  if (hidden.sizes() != cond.sizes())
    Fail(ErrorKind::kConfig, "gated injection shape mismatch: hidden " +
                                 c10::str(hidden.sizes()) + " vs cond " +
                                 c10::str(cond.sizes()));
  if (hidden.size(1) % 2 != 0)
    Fail(ErrorKind::kConfig, "gated injection needs an even channel count");
  auto acts = hidden + cond;
  auto halves = acts.chunk(2, 1);
  return torch::tanh(halves[0]) * torch::sigmoid(halves[1]);
}

CondNetImpl::CondNetImpl(const CondNetConfig &cfg, int in_channels,
                         int cond_channels)
    : cfg_(cfg) {
  int in = in_channels;
  for (int i = 1; i <= cfg.n_layers; ++i) {
    int out = cfg.channel_growth * i;
    encoder_->push_back(ZeroBiasConv(in, out, cfg.kernel_size));
    blocks_->push_back(ZeroBiasConv(out, cond_channels, 1));
    in = out;
  }
  register_module("encoder", encoder_);
  register_module("cond_blocks", blocks_);
}

std::vector<torch::Tensor> CondNetImpl::Encode(const torch::Tensor &y) {
  std::vector<torch::Tensor> out;
  out.reserve(encoder_->size());
  auto h = y;
  for (const auto &layer : *encoder_) {
    h = torch::leaky_relu(layer->as<nn::Conv1d>()->forward(h),
                          cfg_.leaky_slope);
    out.push_back(h);
  }
  return out;
}

torch::Tensor CondNetImpl::CondBlock(int layer, const torch::Tensor &feature) {
  return blocks_[layer]->as<nn::Conv1d>()->forward(feature);
}

CondFeatures CondNetImpl::forward(const torch::Tensor &y) {
  auto features = Encode(y);
  CondFeatures stack;
  stack.reserve(features.size());
  for (size_t i = 0; i < features.size(); ++i)
    stack.push_back(CondBlock(static_cast<int>(i), features[i]));
  return stack;
}

BaselineCondImpl::BaselineCondImpl(int n_blocks, int in_channels,
                                   int cond_channels, int kernel) {
  for (int b = 0; b < n_blocks; ++b) {
    depthwise_->push_back(
        ZeroBiasConv(in_channels, in_channels, kernel, in_channels));
    pointwise_->push_back(ZeroBiasConv(in_channels, cond_channels, 1));
  }
  register_module("depthwise", depthwise_);
  register_module("pointwise", pointwise_);
}

CondFeatures BaselineCondImpl::forward(const torch::Tensor &y) {
  CondFeatures stack;
  for (size_t b = 0; b < depthwise_->size(); ++b) {
    auto h = depthwise_[b]->as<nn::Conv1d>()->forward(y);
    stack.push_back(pointwise_[b]->as<nn::Conv1d>()->forward(h));
  }
  return stack;
}

}  // namespace sefgan
