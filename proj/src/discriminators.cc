// src/discriminators.cc

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

#include "sefgan/discriminators.h"

#include <algorithm>
#include <numeric>

#include "sefgan/error.h"

namespace sefgan {

namespace nn = torch::nn;
namespace F = torch::nn::functional;

namespace {

constexpr double kSlope = 0.1;

int Width(int full, int divisor) { return std::max(1, full / divisor); }

int Groups(int wanted, int in, int out) {
  return std::gcd(wanted, std::gcd(in, out));
}

}  // namespace

CriticConvImpl::CriticConvImpl(const Options &opt) : opt_(opt) {
  torch::Tensor w, b;
  if (opt.dims == 1) {
    nn::Conv1d c(nn::Conv1dOptions(opt.in, opt.out, opt.kernel).groups(opt.groups));
    w = c->weight.detach().clone();
    b = c->bias.detach().clone();
  } else {
    // Kernels run along the time axis of the folded grid: shape (1, k).
    nn::Conv2d c(nn::Conv2dOptions(opt.in, opt.out, {1, opt.kernel})
                     .groups(opt.groups));
    w = c->weight.detach().clone();
    b = c->bias.detach().clone();
  }
  v_ = register_parameter("v", w);
  bias_ = register_parameter("bias", b);
  if (opt.norm == ConvNorm::kWeight) {
    std::vector<int64_t> dims(w.dim() - 1);
    std::iota(dims.begin(), dims.end(), 1);
    g_ = register_parameter(
        "g", w.detach().norm(2, dims, /*keepdim=*/true));
  }
}

torch::Tensor CriticConvImpl::EffectiveWeight() const {
  if (opt_.norm == ConvNorm::kWeight) {
    std::vector<int64_t> dims(v_.dim() - 1);
    std::iota(dims.begin(), dims.end(), 1);
    return g_ * v_ / v_.norm(2, dims, /*keepdim=*/true);
  }
  auto sigma = torch::linalg_matrix_norm(v_.reshape({v_.size(0), -1}), 2);
  return v_ / sigma;
}

torch::Tensor CriticConvImpl::forward(const torch::Tensor &x) {
  auto w = EffectiveWeight();
  if (opt_.dims == 1)
    return F::conv1d(x, w,
                     F::Conv1dFuncOptions()
                         .bias(bias_)
                         .stride(opt_.stride)
                         .padding(opt_.padding)
                         .groups(opt_.groups));
  return F::conv2d(x, w,
                   F::Conv2dFuncOptions()
                       .bias(bias_)
                       .stride({1, opt_.stride})
                       .padding({0, opt_.padding})
                       .groups(opt_.groups));
}

torch::Tensor FoldForPeriod(const torch::Tensor &audio, int period) {
  auto x = audio.dim() == 1 ? audio.unsqueeze(0) : audio;
  int64_t n = x.size(1);
  int64_t pad = (period - n % period) % period;
  if (pad > 0) {
    F::PadFuncOptions opts({0, pad});
    if (pad < n)
      opts.mode(torch::kReflect);
    else
      opts.mode(torch::kReplicate);
    x = F::pad(x.unsqueeze(1), opts).squeeze(1);
    n += pad;
  }
  return x.reshape({x.size(0), n / period, period})
      .transpose(1, 2)
      .unsqueeze(1);
}

torch::Tensor PoolForScale(const torch::Tensor &audio, int scale) {
  auto x = audio.dim() == 1 ? audio.unsqueeze(0) : audio;
  x = x.unsqueeze(1);
  for (int k = 0; k < scale; ++k) x = F::avg_pool1d(x, F::AvgPool1dFuncOptions(2));
  return x.squeeze(1);
}

PeriodDiscriminatorImpl::PeriodDiscriminatorImpl(int period, int div)
    : period_(period) {
  const int widths[] = {Width(32, div), Width(128, div), Width(512, div),
                        Width(1024, div), Width(1024, div)};
  int in = 1;
  for (int i = 0; i < 5; ++i) {
    CriticConvImpl::Options o;
    o.dims = 2;
    o.in = in;
    o.out = widths[i];
    o.kernel = 5;
    o.stride = i < 4 ? 3 : 1;
    o.padding = 2;
    convs_->push_back(CriticConv(o));
    in = widths[i];
  }
  register_module("convs", convs_);
  CriticConvImpl::Options o;
  o.dims = 2;
  o.in = in;
  o.out = 1;
  o.kernel = 3;
  o.padding = 1;
  post_ = register_module("post", CriticConv(o));
}

DiscOutput PeriodDiscriminatorImpl::forward(const torch::Tensor &audio) {
  DiscOutput out;
  auto x = FoldForPeriod(audio, period_);
  for (const auto &m : *convs_) {
    x = torch::leaky_relu(m->as<CriticConv>()->forward(x), kSlope);
    out.features.push_back(x);
  }
  x = post_(x);
  out.features.push_back(x);
  out.scores = x.flatten(1);
  return out;
}

ScaleDiscriminatorImpl::ScaleDiscriminatorImpl(int scale, int div)
    : scale_(scale) {
  struct Layer {
    int out, kernel, stride, groups, padding;
  };
  const Layer layers[] = {{128, 15, 1, 1, 7},   {128, 41, 2, 4, 20},
                          {256, 41, 2, 16, 20}, {512, 41, 4, 16, 20},
                          {1024, 41, 4, 16, 20}, {1024, 41, 1, 16, 20},
                          {1024, 5, 1, 1, 2}};
  const ConvNorm norm = scale == 0 ? ConvNorm::kSpectral : ConvNorm::kWeight;
  int in = 1;
  for (const auto &l : layers) {
    CriticConvImpl::Options o;
    o.in = in;
    o.out = Width(l.out, div);
    o.kernel = l.kernel;
    o.stride = l.stride;
    o.groups = Groups(l.groups, o.in, o.out);
    o.padding = l.padding;
    o.norm = norm;
    convs_->push_back(CriticConv(o));
    in = o.out;
  }
  register_module("convs", convs_);
  CriticConvImpl::Options o;
  o.in = in;
  o.out = 1;
  o.kernel = 3;
  o.padding = 1;
  o.norm = norm;
  post_ = register_module("post", CriticConv(o));
}

DiscOutput ScaleDiscriminatorImpl::forward(const torch::Tensor &audio) {
  DiscOutput out;
  auto x = PoolForScale(audio, scale_).unsqueeze(1);
  for (const auto &m : *convs_) {
    x = torch::leaky_relu(m->as<CriticConv>()->forward(x), kSlope);
    out.features.push_back(x);
  }
  x = post_(x);
  out.features.push_back(x);
  out.scores = x.flatten(1);
  return out;
}

DiscriminatorEnsembleImpl::DiscriminatorEnsembleImpl(const DiscConfig &cfg) {
  cfg.Validate();
  auto periods = cfg.periods;
  std::sort(periods.begin(), periods.end());
  for (int p : periods)
    periods_.push_back(register_module("mpd" + std::to_string(p),
                                       PeriodDiscriminator(p, cfg.width_divisor)));
  for (int s = 0; s < cfg.scales; ++s)
    scales_.push_back(register_module("msd" + std::to_string(s),
                                      ScaleDiscriminator(s, cfg.width_divisor)));
}

std::vector<DiscOutput> DiscriminatorEnsembleImpl::forward(
    const torch::Tensor &audio) {
  std::vector<DiscOutput> out;
  out.reserve(size());
  for (auto &d : periods_) out.push_back(d->forward(audio));
  for (auto &d : scales_) out.push_back(d->forward(audio));
  return out;
}

}  // namespace sefgan
