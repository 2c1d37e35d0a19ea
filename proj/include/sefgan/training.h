// sefgan/training.h

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

// Three training stages share one loop:
//   nf      maximum likelihood on (clean, noisy) pairs,
//   gan     adversarial refinement of the inverse flow, started from nf,
//   hybrid  gan plus a separate likelihood update on every batch.
// All randomness (crop offsets, batch order, latent draws) derives from the
// configured seed, so a run is reproducible and can be resumed mid-epoch from
// a checkpoint without changing the loss trajectory.

#ifndef SEFGAN_TRAINING_H_
#define SEFGAN_TRAINING_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "json.hpp"
#include "sefgan/config.h"
#include "sefgan/data.h"
#include "sefgan/discriminators.h"
#include "sefgan/model.h"

namespace sefgan {

inline constexpr uint32_t kCheckpointVersion = 1;

/// Binary container: "SEFGANCK", u32 format version, u32 header length, JSON
/// header, u64 payload length, libtorch archive with parameters, optimizer
/// states and the latent RNG state.
struct Checkpoint {
  uint32_t format_version = kCheckpointVersion;
  Stage stage = Stage::kNf;
  std::string config_hash;
  nlohmann::json model_config;
  nlohmann::json state;  // epoch counters, schedulers, best validation value
  std::string payload;

  int epoch() const;
  double best_val() const;
};

void SaveCheckpoint(const std::string &path, const Checkpoint &ckpt);
Checkpoint LoadCheckpoint(const std::string &path);
std::string SerializeCheckpoint(const Checkpoint &ckpt);
Checkpoint DeserializeCheckpoint(const std::string &bytes);

/// Rebuilds the generator stored in a checkpoint. When `expected` is given its
/// hash must match the checkpoint's, otherwise kVersion is thrown.
Enhancer LoadEnhancer(const Checkpoint &ckpt,
                      const ModelConfig *expected = nullptr);

/// Reduce-on-plateau: after more than `patience` consecutive epochs without a
/// new minimum the rate is multiplied by `factor`.
class PlateauScheduler {
 public:
  PlateauScheduler(double lr, double factor, int patience)
      : lr_(lr), factor_(factor), patience_(patience) {}

  /// Returns true when the rate was reduced.
  bool Observe(double value);
  double lr() const { return lr_; }
  int reductions() const { return reductions_; }

  nlohmann::json ToJson() const;
  void FromJson(const nlohmann::json &j);

 private:
  double lr_;
  double factor_;
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int bad_epochs_ = 0;
  int reductions_ = 0;
};

/// Stops after `patience` consecutive epochs without a new minimum.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}

  /// Returns true if `value` is a new best.
  bool Observe(double value);
  bool ShouldStop() const { return since_best_ >= patience_; }
  double best() const { return best_; }
  int best_epoch() const { return best_epoch_; }
  int since_best() const { return since_best_; }

  nlohmann::json ToJson() const;
  void FromJson(const nlohmann::json &j);

 private:
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int best_epoch_ = -1;
  int epochs_ = 0;
  int since_best_ = 0;
};

/// lr for 0-based epoch `epoch` under per-epoch exponential decay.
double ExponentialLr(double base, double decay, int epoch);

struct StepRecord {
  int64_t step = 0;
  int epoch = 0;
  int optimizer_steps = 0;
  std::map<std::string, double> losses;
  double lr_g = 0.0;
  double lr_d = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  std::map<std::string, double> train;  // epoch means of step losses
  double val_nll = 0.0;
  double val_mrstft = 0.0;  // gan / hybrid only
  double lr_g = 0.0;
  bool improved = false;
  bool discriminator_collapsed = false;
};

struct TrainResult {
  Checkpoint best;
  Checkpoint last;
  std::vector<EpochRecord> history;
  bool early_stopped = false;
};

class Trainer {
 public:
  using LogSink = std::function<void(const nlohmann::ordered_json &)>;

  /// Fresh run. gan and hybrid stages need `init`, an nf-stage checkpoint.
  Trainer(const RunConfig &cfg, std::vector<Utterance> train,
          std::vector<Utterance> val, const Checkpoint *init = nullptr);

  /// Resumes from a checkpoint written by Snapshot() of the same stage.
  static std::unique_ptr<Trainer> Resume(const RunConfig &cfg,
                                         std::vector<Utterance> train,
                                         std::vector<Utterance> val,
                                         const Checkpoint &ckpt);

  void set_log_sink(LogSink sink) { log_ = std::move(sink); }

  /// One batch: 1 optimizer step (nf), 2 (gan) or 3 (hybrid two-step).
  StepRecord Step();
  /// Runs steps until the current epoch is complete (validation and schedule
  /// updates happen automatically after its last step).
  EpochRecord FinishEpoch();
  const std::vector<EpochRecord> &history() const { return history_; }
  /// Trains until the stage's stopping rule fires (or max_steps).
  TrainResult Run();

  bool Done() const;
  Checkpoint Snapshot() const;

  double ValidationNll();
  double ValidationMrStft();

  Enhancer generator() const { return generator_; }
  DiscriminatorEnsemble discriminators() const { return disc_; }
  int epoch() const { return epoch_; }
  int64_t global_step() const { return global_step_; }
  int steps_per_epoch() const;
  double lr_g() const;
  double lr_d() const;
  std::pair<double, double> gan_betas() const;
  const RunConfig &config() const { return cfg_; }

 private:
  Trainer(const RunConfig &cfg, std::vector<Utterance> train,
          std::vector<Utterance> val, const Checkpoint *init, bool resuming);

  struct Batch {
    torch::Tensor clean;
    torch::Tensor noisy;
  };

  void BuildOptimizers();
  void SetLearningRates();
  std::vector<std::pair<int, int64_t>> EpochCrops(int epoch) const;
  Batch MakeBatch(int epoch, int index) const;
  torch::Tensor DrawLatent(const torch::Tensor &like);
  void ClipAndStep(torch::optim::Optimizer &opt,
                   const std::vector<torch::Tensor> &params);
  EpochRecord EndEpoch();
  void Restore(const Checkpoint &ckpt);
  nlohmann::json StateJson() const;

  RunConfig cfg_;
  Stage stage_;
  std::vector<Utterance> train_;
  std::vector<Utterance> val_;
  Enhancer generator_{nullptr};
  DiscriminatorEnsemble disc_{nullptr};
  std::unique_ptr<torch::optim::Adam> g_opt_;
  std::unique_ptr<torch::optim::Adam> d_opt_;
  at::Generator latent_gen_;

  int epoch_ = 0;
  int step_in_epoch_ = 0;
  int64_t global_step_ = 0;
  bool stopped_ = false;
  PlateauScheduler plateau_;
  EarlyStopper stopper_;
  std::map<std::string, double> epoch_sums_;
  int epoch_steps_ = 0;
  double max_adv_d_ = 0.0;
  std::vector<EpochRecord> history_;
  std::optional<Checkpoint> best_;
  LogSink log_;
};

}  // namespace sefgan

#endif  // SEFGAN_TRAINING_H_
