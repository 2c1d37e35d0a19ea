// src/flow.cc

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

#include "sefgan/flow.h"

#include <cmath>
#include <string>

#include "sefgan/conditioning.h"
#include "sefgan/error.h"

namespace sefgan {

namespace nn = torch::nn;

torch::Tensor Squeeze(const torch::Tensor &waveform, int factor) {
  auto x = waveform.dim() == 1 ? waveform.unsqueeze(0) : waveform;
  if (x.dim() != 2) Fail(ErrorKind::kShape, "squeeze expects [N] or [B, N]");
  int64_t n = x.size(1);
  if (n == 0 || n % factor != 0) {
    int64_t pad = (factor - n % factor) % factor;
    Fail(ErrorKind::kLength,
         "length " + std::to_string(n) + " is not divisible by " +
             std::to_string(factor) + "; pad with " + std::to_string(pad) +
             " trailing samples");
  }
  return x.reshape({x.size(0), n / factor, factor}).transpose(1, 2);
}

torch::Tensor Unsqueeze(const torch::Tensor &squeezed) {
  if (squeezed.dim() != 3) Fail(ErrorKind::kShape, "unsqueeze expects [B, s, T]");
  return squeezed.transpose(1, 2).reshape({squeezed.size(0), -1});
}

torch::Tensor RandomRotation(int n) {
  auto q = std::get<0>(torch::linalg_qr(torch::randn({n, n}, torch::kFloat64)));
  if (torch::det(q).item<double>() < 0) q.select(1, 0).neg_();
  return q.to(torch::kFloat32).contiguous();
}

LayerOutput InvConv(const torch::Tensor &h, const torch::Tensor &weight,
                    Direction dir) {
  if (weight.dim() != 2 || weight.size(0) != weight.size(1))
    Fail(ErrorKind::kShape, "1x1 mixing matrix must be square");
  if (h.size(1) != weight.size(0))
    Fail(ErrorKind::kShape, "1x1 mixing expects " +
                                std::to_string(weight.size(0)) +
                                " channels, got " + std::to_string(h.size(1)));
  auto w64 = weight.to(torch::kFloat64);
  auto logabsdet = std::get<1>(torch::linalg_slogdet(w64));
  if (logabsdet.item<double>() < std::log(1e-12))
    Fail(ErrorKind::kNumerical, "1x1 mixing matrix is numerically singular");
  const double frames = static_cast<double>(h.size(2));
  if (dir == Direction::kForward)
    return {torch::matmul(weight, h), logabsdet * frames};
  auto inv = torch::linalg_inv(w64).to(h.scalar_type());
  return {torch::matmul(inv, h), -logabsdet * frames};
}

CouplingSubnetImpl::CouplingSubnetImpl(int half, const FlowConfig &cfg)
    : channels_(cfg.subnet_channels), layers_(cfg.subnet_layers) {
  const int c = channels_;
  start_ = register_module("start", nn::Conv1d(nn::Conv1dOptions(half, c, 1)));
  for (int i = 0; i < layers_; ++i) {
    int dilation = 1 << i;
    int pad = dilation * (cfg.subnet_kernel - 1) / 2;
    depthwise_->push_back(nn::Conv1d(nn::Conv1dOptions(c, c, cfg.subnet_kernel)
                                         .dilation(dilation)
                                         .padding(pad)
                                         .groups(c)));
    pointwise_->push_back(nn::Conv1d(nn::Conv1dOptions(c, 2 * c, 1)));
    cond_proj_->push_back(
        nn::Conv1d(nn::Conv1dOptions(cfg.cond_channels, 2 * c, 1)));
    int res_out = i < layers_ - 1 ? 2 * c : c;
    res_skip_->push_back(nn::Conv1d(nn::Conv1dOptions(c, res_out, 1)));
  }
  register_module("depthwise", depthwise_);
  register_module("pointwise", pointwise_);
  register_module("cond_proj", cond_proj_);
  register_module("res_skip", res_skip_);
  end_ = register_module("end", nn::Conv1d(nn::Conv1dOptions(c, 2 * half, 1)));
  // Every coupling starts as the identity map.
  torch::NoGradGuard guard;
  end_->weight.zero_();
  end_->bias.zero_();
}

torch::Tensor CouplingSubnetImpl::forward(const torch::Tensor &h1,
                                          const torch::Tensor &cond) {
  auto audio = start_(h1);
  torch::Tensor skip;
  for (int i = 0; i < layers_; ++i) {
    auto hidden = pointwise_[i]->as<nn::Conv1d>()->forward(
        depthwise_[i]->as<nn::Conv1d>()->forward(audio));
    auto acts = GatedInjection(hidden,
                               cond_proj_[i]->as<nn::Conv1d>()->forward(cond));
    auto rs = res_skip_[i]->as<nn::Conv1d>()->forward(acts);
    if (i < layers_ - 1) {
      audio = audio + rs.narrow(1, 0, channels_);
      auto s = rs.narrow(1, channels_, channels_);
      skip = skip.defined() ? skip + s : s;
    } else {
      skip = skip.defined() ? skip + rs : rs;
    }
  }
  return end_(skip);
}

LayerOutput Coupling(const torch::Tensor &h, const torch::Tensor &cond,
                     CouplingSubnet &subnet, Direction dir, double clamp,
                     int block) {
  const int64_t c = h.size(1);
  if (c % 2 != 0)
    Fail(ErrorKind::kConfig, "coupling needs an even channel count, got " +
                                 std::to_string(c));
  if (cond.size(-1) != h.size(-1))
    Fail(ErrorKind::kShape, "conditioning length " +
                                std::to_string(cond.size(-1)) +
                                " != signal frames " +
                                std::to_string(h.size(-1)));
  const int64_t half = c / 2;
  auto h1 = h.narrow(1, 0, half);
  auto h2 = h.narrow(1, half, half);
  auto out = subnet->forward(h1, cond);
  if (!torch::isfinite(out).all().item<bool>())
    Fail(ErrorKind::kNumerical,
         "non-finite coupling subnet output in block " + std::to_string(block));
  auto log_s = torch::clamp(out.narrow(1, 0, half), -clamp, clamp);
  auto t = out.narrow(1, half, half);
  auto sum = log_s.to(torch::kFloat64).sum({1, 2});
  if (dir == Direction::kForward)
    return {torch::cat({h1, h2 * torch::exp(log_s) + t}, 1), sum};
  return {torch::cat({h1, (h2 - t) * torch::exp(-log_s)}, 1), -sum};
}

FlowImpl::FlowImpl(const FlowConfig &cfg) : cfg_(cfg) {
  cfg_.Validate();
  for (int b = 0; b < cfg_.n_blocks; ++b) {
    int c = cfg_.ChannelsAtBlock(b);
    mixing_.push_back(register_parameter("mix" + std::to_string(b),
                                         RandomRotation(c)));
    subnets_.push_back(register_module("coupling" + std::to_string(b),
                                       CouplingSubnet(c / 2, cfg_)));
  }
}

void FlowImpl::CheckCond(const CondFeatures &cond, int64_t frames) const {
  if (static_cast<int>(cond.size()) != cfg_.n_blocks)
    Fail(ErrorKind::kConfig, "conditioning stack has " +
                                 std::to_string(cond.size()) +
                                 " maps, flow has " +
                                 std::to_string(cfg_.n_blocks) + " blocks");
  for (const auto &c : cond)
    if (c.size(-1) != frames)
      Fail(ErrorKind::kShape, "conditioning map length " +
                                  std::to_string(c.size(-1)) + " != " +
                                  std::to_string(frames) + " frames");
}

LatentState FlowImpl::Forward(const torch::Tensor &x,
                              const CondFeatures &cond) {
  auto h = Squeeze(x, cfg_.squeeze_factor);
  CheckCond(cond, h.size(2));
  auto logdet = torch::zeros({h.size(0)}, h.options().dtype(torch::kFloat64));
  std::vector<torch::Tensor> outputs;
  for (int b = 0; b < cfg_.n_blocks; ++b) {
    auto mixed = InvConv(h, mixing_[b], Direction::kForward);
    auto coupled = Coupling(mixed.h, cond[b], subnets_[b], Direction::kForward,
                            cfg_.log_scale_clamp, b);
    logdet = logdet + mixed.logdet + coupled.logdet;
    h = coupled.h;
    if (cfg_.EmitsAfterBlock(b)) {
      outputs.push_back(h.narrow(1, 0, cfg_.early_output_channels));
      h = h.narrow(1, cfg_.early_output_channels,
                   h.size(1) - cfg_.early_output_channels);
    }
  }
  outputs.push_back(h);
  return {torch::cat(outputs, 1), logdet};
}

torch::Tensor FlowImpl::Inverse(const torch::Tensor &z_in,
                                const CondFeatures &cond) {
  const int s = cfg_.squeeze_factor;
  auto z = z_in.dim() == 2 ? Squeeze(z_in, s) : z_in;
  if (z.dim() != 3 || z.size(1) != s)
    Fail(ErrorKind::kShape, "latent must be [B, " + std::to_string(s) +
                                ", T] or [B, N], got " + c10::str(z.sizes()));
  CheckCond(cond, z.size(2));

  // Channel offset in z of the group emitted after each block.
  std::vector<int> offset(cfg_.n_blocks, -1);
  int next = 0;
  for (int b = 0; b < cfg_.n_blocks; ++b)
    if (cfg_.EmitsAfterBlock(b)) {
      offset[b] = next;
      next += cfg_.early_output_channels;
    }
  auto h = z.narrow(1, next, s - next);
  for (int b = cfg_.n_blocks - 1; b >= 0; --b) {
    if (offset[b] >= 0)
      h = torch::cat({z.narrow(1, offset[b], cfg_.early_output_channels), h}, 1);
    h = Coupling(h, cond[b], subnets_[b], Direction::kInverse,
                 cfg_.log_scale_clamp, b)
            .h;
    h = InvConv(h, mixing_[b], Direction::kInverse).h;
  }
  return Unsqueeze(h);
}

}  // namespace sefgan
