// src/config.cc

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

#include "sefgan/config.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sefgan/error.h"

namespace sefgan {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void Require(bool cond, const std::string &what) {
  if (!cond) Fail(ErrorKind::kConfig, what);
}

// Reads fields out of one JSON object and remembers which keys were consumed,
// so that typos in config files are reported instead of silently ignored.
class SectionReader {
 public:
  SectionReader(const json &j, std::string section)
      : j_(j), section_(std::move(section)) {
    if (!j_.is_object())
      Fail(ErrorKind::kConfig, "section '" + section_ + "' must be an object");
  }

  template <typename T>
  void Get(const char *key, T *out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      *out = j_.at(key).get<T>();
    } catch (const json::exception &e) {
      Fail(ErrorKind::kConfig,
           "bad value for " + section_ + "." + key + ": " + e.what());
    }
  }

  const json *Sub(const char *key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        Fail(ErrorKind::kConfig,
             "unknown key '" + section_ + "." + it.key() + "'");
  }

 private:
  const json &j_;
  std::string section_;
  std::set<std::string> used_;
};

std::string ReconName(ReconLoss r) {
  switch (r) {
    case ReconLoss::kMrStft: return "mrstft";
    case ReconLoss::kMel: return "mel";
    case ReconLoss::kSiSdr: return "sisdr";
  }
  return "mrstft";
}

ReconLoss ParseRecon(const std::string &s) {
  if (s == "mrstft") return ReconLoss::kMrStft;
  if (s == "mel") return ReconLoss::kMel;
  if (s == "sisdr") return ReconLoss::kSiSdr;
  Fail(ErrorKind::kConfig, "unknown reconstruction loss '" + s + "'");
}

std::string HybridName(HybridMode m) {
  return m == HybridMode::kTwoStep ? "two_step" : "combined";
}

HybridMode ParseHybrid(const std::string &s) {
  if (s == "two_step") return HybridMode::kTwoStep;
  if (s == "combined") return HybridMode::kCombined;
  Fail(ErrorKind::kConfig, "unknown hybrid mode '" + s + "'");
}

}  // namespace

std::string StageName(Stage stage) {
  switch (stage) {
    case Stage::kNf: return "nf";
    case Stage::kGan: return "gan";
    case Stage::kHybrid: return "hybrid";
  }
  return "nf";
}

Stage ParseStage(const std::string &name) {
  if (name == "nf") return Stage::kNf;
  if (name == "gan") return Stage::kGan;
  if (name == "hybrid") return Stage::kHybrid;
  Fail(ErrorKind::kConfig, "unknown stage '" + name + "'");
}

int FlowConfig::ChannelsAtBlock(int b) const {
  int c = squeeze_factor;
  for (int i = 0; i < b; ++i)
    if (EmitsAfterBlock(i)) c -= early_output_channels;
  return c;
}

bool FlowConfig::EmitsAfterBlock(int b) const {
  if (early_output_every <= 0 || early_output_channels <= 0) return false;
  return (b + 1) % early_output_every == 0 && b + 1 < n_blocks;
}

int FlowConfig::FinalChannels() const { return ChannelsAtBlock(n_blocks); }

void FlowConfig::Validate() const {
  Require(n_blocks >= 1, "flow.n_blocks must be >= 1");
  Require(squeeze_factor >= 2, "flow.squeeze_factor must be >= 2");
  Require(subnet_layers >= 1, "flow.subnet_layers must be >= 1");
  Require(subnet_channels >= 1, "flow.subnet_channels must be >= 1");
  Require(cond_channels >= 1, "flow.cond_channels must be >= 1");
  Require(subnet_kernel >= 1 && subnet_kernel % 2 == 1,
          "flow.subnet_kernel must be odd");
  Require(early_output_every >= 0 && early_output_channels >= 0,
          "flow early-output schedule must be non-negative");
  Require(log_scale_clamp > 0, "flow.log_scale_clamp must be > 0");
  for (int b = 0; b <= n_blocks; ++b) {
    int c = ChannelsAtBlock(b);
    Require(c >= 2 && c % 2 == 0,
            "flow early-output schedule leaves " + std::to_string(c) +
                " channels at block " + std::to_string(b) +
                "; coupling needs an even count >= 2");
  }
}

void CondNetConfig::Validate(const FlowConfig &flow) const {
  Require(kernel_size >= 1 && kernel_size % 2 == 1,
          "cond.kernel_size must be odd");
  Require(baseline_kernel >= 1 && baseline_kernel % 2 == 1,
          "cond.baseline_kernel must be odd");
  Require(channel_growth >= 1, "cond.channel_growth must be >= 1");
  if (use_condnet) {
    Require(n_layers >= 1, "cond.n_layers must be >= 1");
    Require(n_layers == flow.n_blocks,
            "cond.n_layers (" + std::to_string(n_layers) +
                ") must equal flow.n_blocks (" +
                std::to_string(flow.n_blocks) + ")");
  }
}

void DiscConfig::Validate() const {
  Require(scales >= 0 && scales <= 8, "disc.scales must be in [0, 8]");
  Require(NumDiscriminators() >= 1, "discriminator ensemble is empty");
  Require(width_divisor >= 1, "disc.width_divisor must be >= 1");
  for (int p : periods) Require(p >= 2, "disc periods must be >= 2");
}

void ModelConfig::Validate() const {
  flow.Validate();
  cond.Validate(flow);
  disc.Validate();
}

void LossConfig::Validate() const {
  Require(!resolutions.empty(), "loss needs at least one STFT resolution");
  for (const auto &r : resolutions) {
    Require(r.fft_size > 0 && r.hop > 0 && r.window_length > 0,
            "STFT resolution values must be positive");
    Require(r.window_length <= r.fft_size,
            "STFT window_length must be <= fft_size");
    Require(r.hop < r.window_length, "STFT hop must be < window_length");
  }
  Require(lambda_fm >= 0 && lambda_rec >= 0, "loss weights must be >= 0");
  Require(log_floor > 0, "loss.log_floor must be > 0");
}

void TrainConfig::Validate() const {
  Require(batch_size >= 1, "train.batch_size must be >= 1");
  Require(nf_lr > 0 && g_lr > 0 && d_lr > 0, "learning rates must be > 0");
  Require(plateau_factor > 0 && plateau_factor < 1,
          "train.plateau_factor must be in (0, 1)");
  Require(plateau_patience >= 1 && early_stop_patience >= 1,
          "patience values must be >= 1");
  Require(nf_max_epochs >= 1 && gan_epochs >= 1, "epoch caps must be >= 1");
  Require(gan_beta1 >= 0 && gan_beta1 < 1 && gan_beta2 >= 0 && gan_beta2 < 1,
          "Adam betas must be in [0, 1)");
  Require(lr_decay_gan > 0 && lr_decay_gan <= 1,
          "train.lr_decay_gan must be in (0, 1]");
  Require(lambda_nll >= 0, "train.lambda must be >= 0");
  Require(train_temperature >= 0, "train.train_temperature must be >= 0");
  Require(grad_clip > 0, "train.grad_clip must be > 0");
  Require(max_steps >= 0, "train.max_steps must be >= 0");
  Require(log_every >= 1, "train.log_every must be >= 1");
  loss.Validate();
}

void DataConfig::Validate(const FlowConfig &flow) const {
  Require(segment_samples > 0, "data.segment_samples must be > 0");
  Require(segment_samples % flow.squeeze_factor == 0,
          "data.segment_samples must be divisible by flow.squeeze_factor");
  Require(target_peak > 0 && target_peak <= 1,
          "data.target_peak must be in (0, 1]");
}

void EvalConfig::Validate() const {
  Require(temperature >= 0, "eval.temperature must be >= 0");
  Require(bin_width > 0, "eval.bin_width must be > 0");
  Require(rtf_warmup >= 0 && rtf_files >= 1, "bad rtf settings");
  Require(split == "train" || split == "val" || split == "test" ||
              split == "test_low",
          "eval.split must be train|val|test|test_low");
}

void RunConfig::Validate() const {
  model.Validate();
  train.Validate();
  data.Validate(model.flow);
  eval.Validate();
}

ordered_json ToJson(const ModelConfig &c) {
  ordered_json flow = {
      {"n_blocks", c.flow.n_blocks},
      {"squeeze_factor", c.flow.squeeze_factor},
      {"subnet_layers", c.flow.subnet_layers},
      {"subnet_channels", c.flow.subnet_channels},
      {"subnet_kernel", c.flow.subnet_kernel},
      {"cond_channels", c.flow.cond_channels},
      {"early_output_every", c.flow.early_output_every},
      {"early_output_channels", c.flow.early_output_channels},
      {"log_scale_clamp", c.flow.log_scale_clamp}};
  ordered_json cond = {{"use_condnet", c.cond.use_condnet},
                       {"n_layers", c.cond.n_layers},
                       {"channel_growth", c.cond.channel_growth},
                       {"kernel_size", c.cond.kernel_size},
                       {"leaky_slope", c.cond.leaky_slope},
                       {"baseline_kernel", c.cond.baseline_kernel}};
  ordered_json disc = {{"periods", c.disc.periods},
                       {"scales", c.disc.scales},
                       {"width_divisor", c.disc.width_divisor}};
  return {{"flow", flow}, {"cond", cond}, {"disc", disc}};
}

ordered_json ToJson(const TrainConfig &c) {
  ordered_json res = ordered_json::array();
  for (const auto &r : c.loss.resolutions)
    res.push_back({r.fft_size, r.hop, r.window_length});
  return {{"stage", StageName(c.stage)},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"nf_lr", c.nf_lr},
          {"plateau_factor", c.plateau_factor},
          {"plateau_patience", c.plateau_patience},
          {"early_stop_patience", c.early_stop_patience},
          {"nf_max_epochs", c.nf_max_epochs},
          {"gan_epochs", c.gan_epochs},
          {"g_lr", c.g_lr},
          {"d_lr", c.d_lr},
          {"gan_betas", {c.gan_beta1, c.gan_beta2}},
          {"lr_decay_gan", c.lr_decay_gan},
          {"lambda", c.lambda_nll},
          {"hybrid_mode", HybridName(c.hybrid_mode)},
          {"train_temperature", c.train_temperature},
          {"grad_clip", c.grad_clip},
          {"max_steps", c.max_steps},
          {"log_every", c.log_every},
          {"loss",
           {{"resolutions", res},
            {"lambda_fm", c.loss.lambda_fm},
            {"lambda_rec", c.loss.lambda_rec},
            {"recon", ReconName(c.loss.recon)},
            {"log_floor", c.loss.log_floor}}}};
}

ordered_json ToJson(const DataConfig &c) {
  return {{"manifest", c.manifest},
          {"root", c.root},
          {"segment_samples", c.segment_samples},
          {"target_peak", c.target_peak}};
}

ordered_json ToJson(const EvalConfig &c) {
  return {{"temperature", c.temperature},
          {"bin_width", c.bin_width},
          {"rtf_warmup", c.rtf_warmup},
          {"rtf_files", c.rtf_files},
          {"split", c.split}};
}

ordered_json ToJson(const RunConfig &c) {
  return {{"model", ToJson(c.model)},
          {"train", ToJson(c.train)},
          {"data", ToJson(c.data)},
          {"eval", ToJson(c.eval)}};
}

ModelConfig ModelConfigFromJson(const json &j) {
  ModelConfig c;
  SectionReader top(j, "model");
  if (const json *f = top.Sub("flow")) {
    SectionReader r(*f, "model.flow");
    r.Get("n_blocks", &c.flow.n_blocks);
    r.Get("squeeze_factor", &c.flow.squeeze_factor);
    r.Get("subnet_layers", &c.flow.subnet_layers);
    r.Get("subnet_channels", &c.flow.subnet_channels);
    r.Get("subnet_kernel", &c.flow.subnet_kernel);
    r.Get("cond_channels", &c.flow.cond_channels);
    r.Get("early_output_every", &c.flow.early_output_every);
    r.Get("early_output_channels", &c.flow.early_output_channels);
    r.Get("log_scale_clamp", &c.flow.log_scale_clamp);
    r.Finish();
  }
  if (const json *f = top.Sub("cond")) {
    SectionReader r(*f, "model.cond");
    r.Get("use_condnet", &c.cond.use_condnet);
    r.Get("n_layers", &c.cond.n_layers);
    r.Get("channel_growth", &c.cond.channel_growth);
    r.Get("kernel_size", &c.cond.kernel_size);
    r.Get("leaky_slope", &c.cond.leaky_slope);
    r.Get("baseline_kernel", &c.cond.baseline_kernel);
    r.Finish();
  }
  if (const json *f = top.Sub("disc")) {
    SectionReader r(*f, "model.disc");
    r.Get("periods", &c.disc.periods);
    r.Get("scales", &c.disc.scales);
    r.Get("width_divisor", &c.disc.width_divisor);
    r.Finish();
  }
  top.Finish();
  return c;
}

RunConfig RunConfigFromJson(const json &j) {
  RunConfig c;
  SectionReader top(j, "config");
  if (const json *m = top.Sub("model")) c.model = ModelConfigFromJson(*m);
  if (const json *t = top.Sub("train")) {
    SectionReader r(*t, "train");
    std::string stage = StageName(c.train.stage);
    r.Get("stage", &stage);
    c.train.stage = ParseStage(stage);
    r.Get("batch_size", &c.train.batch_size);
    r.Get("seed", &c.train.seed);
    r.Get("nf_lr", &c.train.nf_lr);
    r.Get("plateau_factor", &c.train.plateau_factor);
    r.Get("plateau_patience", &c.train.plateau_patience);
    r.Get("early_stop_patience", &c.train.early_stop_patience);
    r.Get("nf_max_epochs", &c.train.nf_max_epochs);
    r.Get("gan_epochs", &c.train.gan_epochs);
    r.Get("g_lr", &c.train.g_lr);
    r.Get("d_lr", &c.train.d_lr);
    std::vector<double> betas{c.train.gan_beta1, c.train.gan_beta2};
    r.Get("gan_betas", &betas);
    Require(betas.size() == 2, "train.gan_betas must have two entries");
    c.train.gan_beta1 = betas[0];
    c.train.gan_beta2 = betas[1];
    r.Get("lr_decay_gan", &c.train.lr_decay_gan);
    r.Get("lambda", &c.train.lambda_nll);
    std::string mode = HybridName(c.train.hybrid_mode);
    r.Get("hybrid_mode", &mode);
    c.train.hybrid_mode = ParseHybrid(mode);
    r.Get("train_temperature", &c.train.train_temperature);
    r.Get("grad_clip", &c.train.grad_clip);
    r.Get("max_steps", &c.train.max_steps);
    r.Get("log_every", &c.train.log_every);
    if (const json *l = r.Sub("loss")) {
      SectionReader lr(*l, "train.loss");
      std::vector<std::vector<int>> res;
      lr.Get("resolutions", &res);
      if (l->contains("resolutions")) {
        c.train.loss.resolutions.clear();
        for (const auto &v : res) {
          Require(v.size() == 3,
                  "STFT resolution must be [fft_size, hop, window_length]");
          c.train.loss.resolutions.push_back({v[0], v[1], v[2]});
        }
      }
      lr.Get("lambda_fm", &c.train.loss.lambda_fm);
      lr.Get("lambda_rec", &c.train.loss.lambda_rec);
      std::string recon = ReconName(c.train.loss.recon);
      lr.Get("recon", &recon);
      c.train.loss.recon = ParseRecon(recon);
      lr.Get("log_floor", &c.train.loss.log_floor);
      lr.Finish();
    }
    r.Finish();
  }
  if (const json *d = top.Sub("data")) {
    SectionReader r(*d, "data");
    r.Get("manifest", &c.data.manifest);
    r.Get("root", &c.data.root);
    r.Get("segment_samples", &c.data.segment_samples);
    r.Get("target_peak", &c.data.target_peak);
    r.Finish();
  }
  if (const json *e = top.Sub("eval")) {
    SectionReader r(*e, "eval");
    r.Get("temperature", &c.eval.temperature);
    r.Get("bin_width", &c.eval.bin_width);
    r.Get("rtf_warmup", &c.eval.rtf_warmup);
    r.Get("rtf_files", &c.eval.rtf_files);
    r.Get("split", &c.eval.split);
    r.Finish();
  }
  top.Finish();
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    Fail(ErrorKind::kConfig, "cannot parse config '" + path + "': " + e.what());
  }
  return RunConfigFromJson(j);
}

uint64_t Fnv1a64(const std::string &bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string ModelConfigHash(const ModelConfig &c) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ToJson(c).dump())));
  return buf;
}

RunConfig DeskRunConfig(Stage stage) {
  RunConfig c;
  FlowConfig &f = c.model.flow;
  f.n_blocks = 4;
  f.squeeze_factor = 12;
  f.subnet_layers = 4;
  f.subnet_channels = 64;
  f.cond_channels = 64;
  f.early_output_every = 2;
  f.early_output_channels = 2;
  c.model.cond.n_layers = f.n_blocks;
  c.model.cond.channel_growth = 16;
  c.model.disc.width_divisor = 16;

  TrainConfig &t = c.train;
  t.stage = stage;
  t.batch_size = stage == Stage::kNf ? 16 : 4;
  t.nf_lr = 3e-3;
  t.nf_max_epochs = 400;
  t.g_lr = 1e-3;
  t.d_lr = 2e-3;
  t.lr_decay_gan = 0.985;
  t.gan_epochs = 150;
  t.loss.resolutions = {{512, 64, 256}, {256, 32, 128}, {128, 16, 64}};

  c.data.segment_samples = 2400;
  c.eval.temperature = 0.0;
  c.eval.rtf_files = 10;
  return c;
}

}  // namespace sefgan
