// sefgan/config.h

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

#ifndef SEFGAN_CONFIG_H_
#define SEFGAN_CONFIG_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sefgan {

/// Flow topology. Defaults are the full-size enhancement model: 20 blocks on a
/// 12-fold squeezed signal, two channels routed to the latent every 4 blocks.
struct FlowConfig {
  int n_blocks = 20;
  int squeeze_factor = 12;
  int subnet_layers = 8;
  int subnet_channels = 128;
  int subnet_kernel = 3;
  int cond_channels = 256;
  int early_output_every = 4;
  int early_output_channels = 2;
  double log_scale_clamp = 7.0;

  // Number of active channels entering block `b` (0-based).
  int ChannelsAtBlock(int b) const;
  // True if early channels leave the active signal after block `b` (0-based).
  bool EmitsAfterBlock(int b) const;
  int FinalChannels() const;
  void Validate() const;
};

/// Conditioning network. With `use_condnet == false` every flow block gets its
/// own single depthwise-separable layer over the squeezed noisy signal.
struct CondNetConfig {
  bool use_condnet = true;
  int n_layers = 20;
  int channel_growth = 24;
  int kernel_size = 15;
  double leaky_slope = 0.1;
  int baseline_kernel = 15;

  void Validate(const FlowConfig &flow) const;
};

struct DiscConfig {
  std::vector<int> periods{2, 3, 5, 7, 11};
  int scales = 3;
  // Channel widths of the reference critic are divided by this factor.
  int width_divisor = 4;

  int NumDiscriminators() const {
    return static_cast<int>(periods.size()) + scales;
  }
  void Validate() const;
};

struct ModelConfig {
  FlowConfig flow;
  CondNetConfig cond;
  DiscConfig disc;

  void Validate() const;
};

struct StftResolution {
  int fft_size;
  int hop;
  int window_length;
};

enum class ReconLoss { kMrStft, kMel, kSiSdr };
enum class HybridMode { kTwoStep, kCombined };
enum class Stage { kNf, kGan, kHybrid };

std::string StageName(Stage stage);
Stage ParseStage(const std::string &name);

struct LossConfig {
  std::vector<StftResolution> resolutions{
      {1024, 120, 600}, {2048, 240, 1200}, {512, 50, 240}};
  double lambda_fm = 2.0;
  double lambda_rec = 1.0;
  ReconLoss recon = ReconLoss::kMrStft;
  double log_floor = 1e-7;

  void Validate() const;
};

struct TrainConfig {
  Stage stage = Stage::kNf;
  int batch_size = 16;
  uint64_t seed = 0;

  // Likelihood pretraining.
  double nf_lr = 1e-3;
  double plateau_factor = 0.8;
  int plateau_patience = 10;
  int early_stop_patience = 40;
  int nf_max_epochs = 300;

  // Adversarial refinement.
  int gan_epochs = 200;
  double g_lr = 5e-5;
  double d_lr = 2e-4;
  double gan_beta1 = 0.5;
  double gan_beta2 = 0.9;
  double lr_decay_gan = 0.8;
  double lambda_nll = 0.3;
  HybridMode hybrid_mode = HybridMode::kTwoStep;
  double train_temperature = 1.0;

  double grad_clip = 10.0;
  // 0 means no cap; otherwise training stops after this many optimizer
  // iterations (batches).
  int max_steps = 0;
  int log_every = 1;

  LossConfig loss;

  void Validate() const;
};

struct DataConfig {
  std::string manifest;
  std::string root;  // relative manifest paths resolve against this
  // Largest multiple of the default squeeze factor not above 2^14.
  int segment_samples = 16380;
  double target_peak = 0.95;

  void Validate(const FlowConfig &flow) const;
};

struct EvalConfig {
  double temperature = 1.0;
  double bin_width = 0.05;
  int rtf_warmup = 2;
  int rtf_files = 10;
  std::string split = "test";

  void Validate() const;
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  DataConfig data;
  EvalConfig eval;

  void Validate() const;
};

// JSON mapping. Parsing rejects unknown keys; missing keys keep defaults.
nlohmann::ordered_json ToJson(const ModelConfig &c);
nlohmann::ordered_json ToJson(const TrainConfig &c);
nlohmann::ordered_json ToJson(const DataConfig &c);
nlohmann::ordered_json ToJson(const EvalConfig &c);
nlohmann::ordered_json ToJson(const RunConfig &c);

ModelConfig ModelConfigFromJson(const nlohmann::json &j);
RunConfig RunConfigFromJson(const nlohmann::json &j);
RunConfig LoadRunConfig(const std::string &path);

/// Stable 64-bit FNV-1a digest of the model section, hex encoded. Checkpoints
/// carry it so parameters are never loaded into a mismatching topology.
std::string ModelConfigHash(const ModelConfig &c);
uint64_t Fnv1a64(const std::string &bytes);

/// Small configuration that trains in minutes on one CPU core. Used by the
/// acceptance suite and by `configs/desk.json` (nf) and
/// `configs/desk_adv.json` (gan, hybrid); the adversarial stages use a
/// smaller batch.
RunConfig DeskRunConfig(Stage stage = Stage::kNf);

}  // namespace sefgan

#endif  // SEFGAN_CONFIG_H_
