// src/model.cc

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

#include "sefgan/model.h"

#include "sefgan/error.h"
#include "sefgan/losses.h"

namespace sefgan {

EnhancerImpl::EnhancerImpl(const ModelConfig &cfg) : cfg_(cfg) {
  cfg_.Validate();
  const auto &f = cfg_.flow;
  flow_ = register_module("flow", Flow(f));
  if (cfg_.cond.use_condnet)
    condnet_ = register_module(
        "condnet", CondNet(cfg_.cond, f.squeeze_factor, f.cond_channels));
  else
    baseline_ = register_module(
        "baseline_cond", BaselineCond(f.n_blocks, f.squeeze_factor,
                                      f.cond_channels, cfg_.cond.baseline_kernel));
}

CondFeatures EnhancerImpl::BuildCondStack(const torch::Tensor &y) {
  auto y_sq = Squeeze(y, cfg_.flow.squeeze_factor);
  CondFeatures stack = condnet_ ? condnet_->forward(y_sq) : baseline_->forward(y_sq);
  if (static_cast<int>(stack.size()) != cfg_.flow.n_blocks)
    Fail(ErrorKind::kConfig, "conditioning produced " +
                                 std::to_string(stack.size()) + " maps for " +
                                 std::to_string(cfg_.flow.n_blocks) +
                                 " flow blocks");
  return stack;
}

LatentState EnhancerImpl::Forward(const torch::Tensor &x,
                                  const CondFeatures &cond) {
  return flow_->Forward(x, cond);
}

LatentState EnhancerImpl::Forward(const torch::Tensor &x,
                                  const torch::Tensor &y) {
  if (x.sizes() != y.sizes())
    Fail(ErrorKind::kShape, "clean and noisy shapes differ");
  return flow_->Forward(x, BuildCondStack(y));
}

torch::Tensor EnhancerImpl::Inverse(const torch::Tensor &z,
                                    const CondFeatures &cond) {
  return flow_->Inverse(z, cond);
}

torch::Tensor EnhancerImpl::Inverse(const torch::Tensor &z,
                                    const torch::Tensor &y) {
  return flow_->Inverse(z, BuildCondStack(y));
}

torch::Tensor EnhancerImpl::LogLikelihood(const torch::Tensor &x,
                                          const torch::Tensor &y) {
  auto latent = Forward(x.dim() == 1 ? x.unsqueeze(0) : x,
                        y.dim() == 1 ? y.unsqueeze(0) : y);
  return NllLoss(latent.z, latent.logdet);
}

int64_t ParameterCount(const torch::nn::Module &module) {
  int64_t n = 0;
  for (const auto &p : module.parameters()) n += p.numel();
  return n;
}

void RandomizeParameters(torch::nn::Module &module, double std, uint64_t seed) {
  torch::NoGradGuard guard;
  auto gen = at::make_generator<at::CPUGeneratorImpl>(seed);
  for (auto &item : module.named_parameters()) {
    auto &p = item.value();
    if (item.key().find("flow.mix") != std::string::npos ||
        item.key().rfind("mix", 0) == 0) {
      const int64_t c = p.size(0);
      auto a = torch::randn({c, c}, gen, torch::kFloat64);
      auto q = std::get<0>(torch::linalg_qr(a));
      auto d = torch::exp(0.3 * torch::randn({c}, gen, torch::kFloat64));
      p.copy_(torch::matmul(q, torch::diag(d)));
    } else {
      p.copy_(torch::randn(p.sizes(), gen, torch::kFloat64) * std);
    }
  }
}

}  // namespace sefgan
