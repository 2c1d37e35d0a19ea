// src/training.cc

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

#include "sefgan/training.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "sefgan/error.h"
#include "sefgan/losses.h"

namespace sefgan {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr char kMagic[8] = {'S', 'E', 'F', 'G', 'A', 'N', 'C', 'K'};

template <typename T>
void PutRaw(std::string *out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out->append(buf, sizeof(T));
}

template <typename T>
T GetRaw(const std::string &in, size_t *pos) {
  if (*pos + sizeof(T) > in.size())
    Fail(ErrorKind::kFormat, "truncated checkpoint");
  T v;
  std::memcpy(&v, in.data() + *pos, sizeof(T));
  *pos += sizeof(T);
  return v;
}

std::string SaveArchive(torch::serialize::OutputArchive &ar) {
  std::ostringstream os;
  ar.save_to(os);
  return os.str();
}

void LoadArchive(const std::string &bytes, torch::serialize::InputArchive *ar) {
  std::istringstream is(bytes);
  ar->load_from(is);
}

void SetLr(torch::optim::Adam &opt, double lr) {
  for (auto &group : opt.param_groups())
    static_cast<torch::optim::AdamOptions &>(group.options()).lr(lr);
}

double GetLr(const torch::optim::Adam &opt) {
  return static_cast<const torch::optim::AdamOptions &>(
             opt.param_groups().front().options())
      .lr();
}

torch::Tensor Stack(const std::vector<Waveform> &ws) {
  std::vector<torch::Tensor> ts;
  ts.reserve(ws.size());
  for (const auto &w : ws) ts.push_back(ToTensor(w));
  return torch::stack(ts);
}

}  // namespace

int Checkpoint::epoch() const { return state.value("epoch", 0); }

double Checkpoint::best_val() const {
  if (!state.contains("stopper")) return 0.0;
  return state["stopper"].value("best", 0.0);
}

std::string SerializeCheckpoint(const Checkpoint &ckpt) {
  json header = {{"format_version", ckpt.format_version},
                 {"stage", StageName(ckpt.stage)},
                 {"config_hash", ckpt.config_hash},
                 {"model_config", ckpt.model_config},
                 {"state", ckpt.state}};
  const std::string h = header.dump();
  std::string out(kMagic, sizeof(kMagic));
  PutRaw<uint32_t>(&out, ckpt.format_version);
  PutRaw<uint32_t>(&out, static_cast<uint32_t>(h.size()));
  out += h;
  PutRaw<uint64_t>(&out, ckpt.payload.size());
  out += ckpt.payload;
  return out;
}

Checkpoint DeserializeCheckpoint(const std::string &bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    Fail(ErrorKind::kFormat, "not a checkpoint (bad magic)");
  size_t pos = sizeof(kMagic);
  Checkpoint c;
  c.format_version = GetRaw<uint32_t>(bytes, &pos);
  if (c.format_version != kCheckpointVersion)
    Fail(ErrorKind::kVersion,
         "checkpoint format version " + std::to_string(c.format_version) +
             " is not readable by this build (supports " +
             std::to_string(kCheckpointVersion) + ")");
  const uint32_t hlen = GetRaw<uint32_t>(bytes, &pos);
  if (pos + hlen > bytes.size()) Fail(ErrorKind::kFormat, "truncated checkpoint");
  json header;
  try {
    header = json::parse(bytes.substr(pos, hlen));
  } catch (const json::exception &e) {
    Fail(ErrorKind::kFormat, std::string("bad checkpoint header: ") + e.what());
  }
  pos += hlen;
  const uint64_t plen = GetRaw<uint64_t>(bytes, &pos);
  if (pos + plen != bytes.size()) Fail(ErrorKind::kFormat, "truncated checkpoint");
  c.payload = bytes.substr(pos, plen);
  c.stage = ParseStage(header.at("stage").get<std::string>());
  c.config_hash = header.at("config_hash").get<std::string>();
  c.model_config = header.at("model_config");
  c.state = header.at("state");
  // The hash guards the payload against being paired with another topology.
  if (ModelConfigHash(ModelConfigFromJson(c.model_config)) != c.config_hash)
    Fail(ErrorKind::kVersion, "checkpoint config hash does not match its "
                              "embedded model config");
  return c;
}

void SaveCheckpoint(const std::string &path, const Checkpoint &ckpt) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write checkpoint '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorKind::kIo, "short write to '" + path + "'");
}

Checkpoint LoadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open checkpoint '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return DeserializeCheckpoint(bytes);
}

Enhancer LoadEnhancer(const Checkpoint &ckpt, const ModelConfig *expected) {
  if (expected != nullptr && ModelConfigHash(*expected) != ckpt.config_hash)
    Fail(ErrorKind::kVersion, "checkpoint was trained with model config " +
                                  ckpt.config_hash + ", current config is " +
                                  ModelConfigHash(*expected));
  Enhancer g(ModelConfigFromJson(ckpt.model_config));
  torch::serialize::InputArchive ar, sub;
  LoadArchive(ckpt.payload, &ar);
  ar.read("generator", sub);
  g->load(sub);
  g->eval();
  return g;
}

bool PlateauScheduler::Observe(double value) {
  if (value < best_) {
    best_ = value;
    bad_epochs_ = 0;
    return false;
  }
  if (++bad_epochs_ > patience_) {
    lr_ *= factor_;
    bad_epochs_ = 0;
    ++reductions_;
    return true;
  }
  return false;
}

json PlateauScheduler::ToJson() const {
  return {{"lr", lr_}, {"best", best_}, {"bad_epochs", bad_epochs_},
          {"reductions", reductions_}};
}

void PlateauScheduler::FromJson(const json &j) {
  lr_ = j.at("lr").get<double>();
  best_ = j.at("best").is_null() ? std::numeric_limits<double>::infinity()
                                 : j.at("best").get<double>();
  bad_epochs_ = j.at("bad_epochs").get<int>();
  reductions_ = j.at("reductions").get<int>();
}

bool EarlyStopper::Observe(double value) {
  const int epoch = epochs_++;
  if (value < best_) {
    best_ = value;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

json EarlyStopper::ToJson() const {
  return {{"best", best_}, {"best_epoch", best_epoch_}, {"epochs", epochs_},
          {"since_best", since_best_}};
}

void EarlyStopper::FromJson(const json &j) {
  best_ = j.at("best").is_null() ? std::numeric_limits<double>::infinity()
                                 : j.at("best").get<double>();
  best_epoch_ = j.at("best_epoch").get<int>();
  epochs_ = j.at("epochs").get<int>();
  since_best_ = j.at("since_best").get<int>();
}

double ExponentialLr(double base, double decay, int epoch) {
  return base * std::pow(decay, epoch);
}

Trainer::Trainer(const RunConfig &cfg, std::vector<Utterance> train,
                 std::vector<Utterance> val, const Checkpoint *init)
    : Trainer(cfg, std::move(train), std::move(val), init, false) {}

Trainer::Trainer(const RunConfig &cfg, std::vector<Utterance> train,
                 std::vector<Utterance> val, const Checkpoint *init,
                 bool resuming)
    : cfg_(cfg),
      stage_(cfg.train.stage),
      train_(std::move(train)),
      val_(std::move(val)),
      plateau_(cfg.train.nf_lr, cfg.train.plateau_factor,
               cfg.train.plateau_patience),
      stopper_(cfg.train.stage == Stage::kNf
                   ? cfg.train.early_stop_patience
                   : std::numeric_limits<int>::max()) {
  cfg_.Validate();
  if (train_.empty()) Fail(ErrorKind::kConfig, "training split is empty");
  if (!resuming && stage_ != Stage::kNf) {
    if (init == nullptr)
      Fail(ErrorKind::kConfig, StageName(stage_) +
                                   " stage requires a pretrained nf checkpoint");
    if (init->stage != Stage::kNf)
      Fail(ErrorKind::kConfig, StageName(stage_) +
                                   " stage must start from an nf checkpoint, got " +
                                   StageName(init->stage));
  }
  torch::manual_seed(cfg_.train.seed);
  generator_ = Enhancer(cfg_.model);
  if (stage_ != Stage::kNf) disc_ = DiscriminatorEnsemble(cfg_.model.disc);
  latent_gen_ = at::make_generator<at::CPUGeneratorImpl>(cfg_.train.seed + 17);
  if (init != nullptr && !resuming) {
    Enhancer loaded = LoadEnhancer(*init, &cfg_.model);
    torch::NoGradGuard guard;
    auto dst = generator_->parameters();
    auto src = loaded->parameters();
    for (size_t i = 0; i < dst.size(); ++i) dst[i].copy_(src[i]);
  }
  BuildOptimizers();
}

std::unique_ptr<Trainer> Trainer::Resume(const RunConfig &cfg,
                                         std::vector<Utterance> train,
                                         std::vector<Utterance> val,
                                         const Checkpoint &ckpt) {
  if (ckpt.stage != cfg.train.stage)
    Fail(ErrorKind::kConfig, "cannot resume a " + StageName(ckpt.stage) +
                                 " checkpoint as stage " +
                                 StageName(cfg.train.stage));
  std::unique_ptr<Trainer> t(
      new Trainer(cfg, std::move(train), std::move(val), &ckpt, true));
  t->Restore(ckpt);
  return t;
}

void Trainer::BuildOptimizers() {
  const auto &t = cfg_.train;
  if (stage_ == Stage::kNf) {
    g_opt_ = std::make_unique<torch::optim::Adam>(
        generator_->parameters(), torch::optim::AdamOptions(t.nf_lr));
    return;
  }
  auto betas = std::make_tuple(t.gan_beta1, t.gan_beta2);
  g_opt_ = std::make_unique<torch::optim::Adam>(
      generator_->parameters(), torch::optim::AdamOptions(t.g_lr).betas(betas));
  d_opt_ = std::make_unique<torch::optim::Adam>(
      disc_->parameters(), torch::optim::AdamOptions(t.d_lr).betas(betas));
}

double Trainer::lr_g() const { return GetLr(*g_opt_); }
double Trainer::lr_d() const { return d_opt_ ? GetLr(*d_opt_) : 0.0; }

std::pair<double, double> Trainer::gan_betas() const {
  const auto &o = static_cast<const torch::optim::AdamOptions &>(
      g_opt_->param_groups().front().options());
  return {std::get<0>(o.betas()), std::get<1>(o.betas())};
}

void Trainer::SetLearningRates() {
  const auto &t = cfg_.train;
  if (stage_ == Stage::kNf) {
    SetLr(*g_opt_, plateau_.lr());
    return;
  }
  SetLr(*g_opt_, ExponentialLr(t.g_lr, t.lr_decay_gan, epoch_));
  SetLr(*d_opt_, ExponentialLr(t.d_lr, t.lr_decay_gan, epoch_));
}

std::vector<std::pair<int, int64_t>> Trainer::EpochCrops(int epoch) const {
  const uint64_t seed = cfg_.train.seed;
  std::vector<std::pair<int, int64_t>> crops;
  for (size_t i = 0; i < train_.size(); ++i) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(epoch), static_cast<uint32_t>(i), 1u};
    std::mt19937_64 rng(seq);
    auto plan = PlanSegments(train_[i].clean.size(), cfg_.data.segment_samples,
                             SegmentMode::kTrain, &rng);
    for (int64_t s : plan.starts) crops.emplace_back(static_cast<int>(i), s);
  }
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(epoch), 2u};
  std::mt19937_64 rng(seq);
  std::shuffle(crops.begin(), crops.end(), rng);
  return crops;
}

int Trainer::steps_per_epoch() const {
  const int64_t n = static_cast<int64_t>(EpochCrops(0).size());
  return static_cast<int>((n + cfg_.train.batch_size - 1) / cfg_.train.batch_size);
}

Trainer::Batch Trainer::MakeBatch(int epoch, int index) const {
  const auto crops = EpochCrops(epoch);
  const int64_t seg = cfg_.data.segment_samples;
  const size_t begin = static_cast<size_t>(index) * cfg_.train.batch_size;
  const size_t end = std::min(crops.size(), begin + cfg_.train.batch_size);
  std::vector<Waveform> clean, noisy;
  for (size_t k = begin; k < end; ++k) {
    const auto &u = train_[crops[k].first];
    SegmentPlan plan;
    plan.starts = {crops[k].second};
    plan.segment_samples = seg;
    clean.push_back(ApplySegments(u.clean, plan).front());
    noisy.push_back(ApplySegments(u.noisy, plan).front());
  }
  return {Stack(clean), Stack(noisy)};
}

torch::Tensor Trainer::DrawLatent(const torch::Tensor &like) {
  const int s = cfg_.model.flow.squeeze_factor;
  auto z = torch::randn({like.size(0), s, like.size(1) / s}, latent_gen_,
                        like.options());
  return z * cfg_.train.train_temperature;
}

void Trainer::ClipAndStep(torch::optim::Optimizer &opt,
                          const std::vector<torch::Tensor> &params) {
  torch::nn::utils::clip_grad_norm_(params, cfg_.train.grad_clip);
  opt.step();
}

StepRecord Trainer::Step() {
  if (stopped_) Fail(ErrorKind::kConfig, "training already finished");
  if (step_in_epoch_ == 0) {
    epoch_sums_.clear();
    epoch_steps_ = 0;
    max_adv_d_ = 0.0;
  }
  SetLearningRates();
  StepRecord rec;
  rec.step = global_step_;
  rec.epoch = epoch_;
  rec.lr_g = lr_g();
  rec.lr_d = lr_d();

  Batch b = MakeBatch(epoch_, step_in_epoch_);
  generator_->train();
  const auto g_params = generator_->parameters();
  const double lambda = cfg_.train.lambda_nll;

  try {
    if (stage_ == Stage::kNf) {
      auto latent = generator_->Forward(b.clean, b.noisy);
      auto nll = NllLoss(latent.z, latent.logdet).mean();
      g_opt_->zero_grad();
      nll.backward();
      ClipAndStep(*g_opt_, g_params);
      rec.optimizer_steps = 1;
      rec.losses["nll"] = nll.item<double>();
    } else {
      disc_->train();
      const bool two_step =
          stage_ == Stage::kHybrid && cfg_.train.hybrid_mode == HybridMode::kTwoStep;
      const bool combined =
          stage_ == Stage::kHybrid && cfg_.train.hybrid_mode == HybridMode::kCombined;
      // With lambda = 0 the likelihood update is a no-op and is skipped, so
      // the stage reduces exactly to gan.
      if (two_step && lambda > 0.0) {
        auto latent = generator_->Forward(b.clean, b.noisy);
        auto nll = NllLoss(latent.z, latent.logdet).mean();
        g_opt_->zero_grad();
        (lambda * nll).backward();
        ClipAndStep(*g_opt_, g_params);
        ++rec.optimizer_steps;
        rec.losses["nll"] = nll.item<double>();
      }

      auto cond = generator_->BuildCondStack(b.noisy);
      auto fake = generator_->Inverse(DrawLatent(b.clean), cond);

      d_opt_->zero_grad();
      auto d_loss = DiscriminatorLoss(disc_->forward(b.clean),
                                      disc_->forward(fake.detach()));
      d_loss.backward();
      ClipAndStep(*d_opt_, disc_->parameters());
      ++rec.optimizer_steps;
      rec.losses["adv_d"] = d_loss.item<double>();
      max_adv_d_ = std::max(max_adv_d_, rec.losses["adv_d"]);

      g_opt_->zero_grad();
      auto disc_fake = disc_->forward(fake);
      std::vector<DiscOutput> disc_real;
      {
        torch::NoGradGuard guard;
        disc_real = disc_->forward(b.clean);
      }
      LossReport rep = GeneratorLoss(disc_real, disc_fake, b.clean, fake,
                                     cfg_.train.loss);
      torch::Tensor total = rep.total;
      if (combined) {
        auto latent = generator_->Forward(b.clean, b.noisy);
        auto nll = NllLoss(latent.z, latent.logdet).mean();
        total = HybridLoss(rep, nll, lambda);
        rec.losses["nll"] = nll.item<double>();
      }
      total.backward();
      ClipAndStep(*g_opt_, g_params);
      ++rec.optimizer_steps;
      for (const auto &[k, v] : rep.Values())
        rec.losses[k == "total" ? "g_total" : k] = v;
    }
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kNumerical) throw;
    Fail(ErrorKind::kNumerical,
         std::string(e.what()) + " at step " + std::to_string(global_step_) +
             "; last good checkpoint: " +
             (best_ ? "best epoch " + std::to_string(best_->epoch())
                    : std::string("none")));
  }
  for (const auto &[k, v] : rec.losses)
    if (!std::isfinite(v))
      Fail(ErrorKind::kNumerical,
           "loss '" + k + "' is not finite at step " +
               std::to_string(global_step_) + "; last good checkpoint: " +
               (best_ ? "best epoch " + std::to_string(best_->epoch())
                      : std::string("none")));

  for (const auto &[k, v] : rec.losses) epoch_sums_[k] += v;
  ++epoch_steps_;
  ++step_in_epoch_;
  ++global_step_;

  if (log_ && (rec.step % cfg_.train.log_every == 0)) {
    ordered_json j = {{"type", "step"},
                      {"stage", StageName(stage_)},
                      {"step", rec.step},
                      {"epoch", rec.epoch},
                      {"lr_g", rec.lr_g},
                      {"lr_d", rec.lr_d}};
    for (const auto &[k, v] : rec.losses) j[k] = v;
    log_(j);
  }
  if (step_in_epoch_ >= steps_per_epoch()) EndEpoch();
  return rec;
}

double Trainer::ValidationNll() {
  torch::NoGradGuard guard;
  generator_->eval();
  const auto &items = val_.empty() ? train_ : val_;
  const int s = cfg_.model.flow.squeeze_factor;
  double sum = 0.0;
  for (const auto &u : items) {
    auto x = PadToMultiple(ToTensor(u.clean).unsqueeze(0), s);
    auto y = PadToMultiple(ToTensor(u.noisy).unsqueeze(0), s);
    sum += generator_->LogLikelihood(x, y).item<double>();
  }
  generator_->train();
  return sum / static_cast<double>(items.size());
}

double Trainer::ValidationMrStft() {
  torch::NoGradGuard guard;
  generator_->eval();
  const auto &items = val_.empty() ? train_ : val_;
  const int s = cfg_.model.flow.squeeze_factor;
  // Fixed draw so epochs are comparable.
  auto gen = at::make_generator<at::CPUGeneratorImpl>(cfg_.train.seed + 99);
  double sum = 0.0;
  for (const auto &u : items) {
    auto y = PadToMultiple(ToTensor(u.noisy).unsqueeze(0), s);
    auto z = torch::randn({1, s, y.size(1) / s}, gen, y.options()) *
             cfg_.train.train_temperature;
    auto est = generator_->Inverse(z, y).narrow(1, 0, u.noisy.size());
    sum += MrStft(ToTensor(u.clean).unsqueeze(0), est, cfg_.train.loss.resolutions,
                  cfg_.train.loss.log_floor)
               .item<double>();
  }
  generator_->train();
  return sum / static_cast<double>(items.size());
}

EpochRecord Trainer::EndEpoch() {
  EpochRecord rec;
  rec.epoch = epoch_;
  rec.lr_g = lr_g();
  for (const auto &[k, v] : epoch_sums_) rec.train[k] = v / std::max(1, epoch_steps_);
  rec.val_nll = ValidationNll();
  if (stage_ == Stage::kNf) {
    rec.improved = stopper_.Observe(rec.val_nll);
    plateau_.Observe(rec.val_nll);
  } else {
    rec.val_mrstft = ValidationMrStft();
    rec.improved = stopper_.Observe(rec.val_mrstft);
    rec.discriminator_collapsed = max_adv_d_ < 1e-4;
  }

  ++epoch_;
  step_in_epoch_ = 0;
  const int cap = stage_ == Stage::kNf ? cfg_.train.nf_max_epochs
                                       : cfg_.train.gan_epochs;
  stopped_ = epoch_ >= cap || (stage_ == Stage::kNf && stopper_.ShouldStop());
  if (rec.improved) best_ = Snapshot();
  history_.push_back(rec);

  if (log_) {
    ordered_json j = {{"type", "epoch"},
                      {"stage", StageName(stage_)},
                      {"step", global_step_},
                      {"epoch", rec.epoch},
                      {"val_nll", rec.val_nll},
                      {"lr", rec.lr_g},
                      {"improved", rec.improved}};
    if (stage_ != Stage::kNf) j["val_mrstft"] = rec.val_mrstft;
    for (const auto &[k, v] : rec.train) j["train_" + k] = v;
    log_(j);
    if (rec.discriminator_collapsed)
      log_({{"type", "warning"},
            {"epoch", rec.epoch},
            {"message", "discriminator collapse: adv_d < 1e-4 for the whole epoch"}});
  }
  return rec;
}

EpochRecord Trainer::FinishEpoch() {
  const int start = epoch_;
  while (epoch_ == start && !stopped_) Step();
  return history_.back();
}

bool Trainer::Done() const {
  return stopped_ ||
         (cfg_.train.max_steps > 0 && global_step_ >= cfg_.train.max_steps);
}

TrainResult Trainer::Run() {
  while (!Done()) Step();
  TrainResult r;
  r.last = Snapshot();
  r.best = best_ ? *best_ : r.last;
  r.history = history_;
  r.early_stopped = stage_ == Stage::kNf && stopper_.ShouldStop();
  return r;
}

json Trainer::StateJson() const {
  return {{"epoch", epoch_},
          {"step_in_epoch", step_in_epoch_},
          {"global_step", global_step_},
          {"stopped", stopped_},
          {"plateau", plateau_.ToJson()},
          {"stopper", stopper_.ToJson()},
          {"epoch_sums", epoch_sums_},
          {"epoch_steps", epoch_steps_},
          {"max_adv_d", max_adv_d_},
          {"seed", cfg_.train.seed}};
}

Checkpoint Trainer::Snapshot() const {
  Checkpoint c;
  c.stage = stage_;
  c.config_hash = ModelConfigHash(cfg_.model);
  c.model_config = ToJson(cfg_.model);
  c.state = StateJson();
  torch::serialize::OutputArchive ar, g, go;
  generator_->save(g);
  ar.write("generator", g);
  g_opt_->save(go);
  ar.write("g_opt", go);
  if (disc_) {
    torch::serialize::OutputArchive d, dopt;
    disc_->save(d);
    ar.write("disc", d);
    d_opt_->save(dopt);
    ar.write("d_opt", dopt);
  }
  ar.write("latent_rng", latent_gen_.get_state());
  c.payload = SaveArchive(ar);
  return c;
}

void Trainer::Restore(const Checkpoint &ckpt) {
  if (ckpt.config_hash != ModelConfigHash(cfg_.model))
    Fail(ErrorKind::kVersion, "checkpoint model config hash " +
                                  ckpt.config_hash + " does not match " +
                                  ModelConfigHash(cfg_.model));
  torch::serialize::InputArchive ar, g, go;
  LoadArchive(ckpt.payload, &ar);
  ar.read("generator", g);
  generator_->load(g);
  ar.read("g_opt", go);
  g_opt_->load(go);
  if (disc_) {
    torch::serialize::InputArchive d, dopt;
    ar.read("disc", d);
    disc_->load(d);
    ar.read("d_opt", dopt);
    d_opt_->load(dopt);
  }
  torch::Tensor rng;
  ar.read("latent_rng", rng);
  latent_gen_.set_state(rng);

  const json &s = ckpt.state;
  epoch_ = s.at("epoch").get<int>();
  step_in_epoch_ = s.at("step_in_epoch").get<int>();
  global_step_ = s.at("global_step").get<int64_t>();
  stopped_ = s.at("stopped").get<bool>();
  plateau_.FromJson(s.at("plateau"));
  stopper_.FromJson(s.at("stopper"));
  epoch_sums_ = s.at("epoch_sums").get<std::map<std::string, double>>();
  epoch_steps_ = s.at("epoch_steps").get<int>();
  max_adv_d_ = s.at("max_adv_d").get<double>();
}

}  // namespace sefgan
