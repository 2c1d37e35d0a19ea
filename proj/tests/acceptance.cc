// tests/acceptance.cc

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

// Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Tolerances and budgets are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "sefgan/config.h"
#include "sefgan/data.h"
#include "sefgan/discriminators.h"
#include "sefgan/error.h"
#include "sefgan/evaluation.h"
#include "sefgan/flow.h"
#include "sefgan/losses.h"
#include "sefgan/model.h"
#include "sefgan/training.h"
#include "test_util.h"

namespace sefgan {
namespace {

// 1: invertibility
constexpr double kRoundTripTol = 1e-3;
constexpr double kRoundTripBudgetS = 60.0;
// 2: logdet oracle
constexpr double kLogdetRelTol = 1e-4;
constexpr double kLogdetBudgetS = 60.0;
// 3: loss analytics
constexpr double kLossTol = 1e-6;
// 4: overfit
constexpr double kNfNllDrop = 0.20;
constexpr int kNfStepBudget = 200;
constexpr double kMrStftDrop = 0.30;
constexpr int kGanEpochBudget = 50;
constexpr double kOverfitBudgetS = 30 * 60.0;
// 5: likelihood drift
constexpr double kHybridMaxDrift = 0.15;
constexpr double kGanMinDrift = 1.0;
constexpr double kDriftBudgetS = 60 * 60.0;
// 6: conditioning cost
constexpr double kRtfRatioMax = 1.3;
constexpr double kRtfBudgetS = 5 * 60.0;
// 7: data pipeline
constexpr double kSnrTolDb = 0.01;
// 8: gradient check
constexpr double kGradRelTol = 1e-3;
// 9: determinism
constexpr int kDeterminismSteps = 50;

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void Require(bool ok, const std::string &what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string Fmt(const char *fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

int g_failures = 0;

void Report(int id, const std::string &name, const Outcome &o, double secs) {
  std::printf("criterion %d %s %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL",
              name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

void RunCriterion(int id, const std::string &name,
                  const std::function<Outcome()> &fn) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception &e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  Report(id, name, o, Since(t0));
}

Outcome Invertibility() {
  const auto t0 = Clock::now();
  ModelConfig m;  // reference size: 20 blocks, s = 12
  Enhancer g(m);
  RandomizeParameters(*g, 0.02, 101);
  g->eval();
  std::mt19937_64 rng(102);
  ManifestEntry e;
  e.snr_db = 5.0;
  auto clean = SyntheticSpeech(1.0, rng);
  auto mix = Mix(clean, SyntheticNoise(1.0, rng), e);
  const int64_t n = static_cast<int64_t>(mix.clean.samples.size()) / 12 * 12;
  auto x = torch::from_blob(mix.clean.samples.data(), {1, n}).clone();
  auto y = torch::from_blob(mix.noisy.samples.data(), {1, n}).clone();
  torch::NoGradGuard guard;
  auto cond = g->BuildCondStack(y);
  auto lat = g->Forward(x, cond);
  auto back = g->Inverse(lat.z, cond);
  const double err = (back - x).abs().max().item<double>();
  const double secs = Since(t0);
  Outcome o;
  o.Require(err <= kRoundTripTol, Fmt("max abs error %.3g (tol %.0e)", err, kRoundTripTol));
  o.Require(secs < kRoundTripBudgetS, Fmt("%.1f s (budget %.0f s)", secs, kRoundTripBudgetS));
  o.Require(std::isfinite(lat.logdet.item<double>()), "finite logdet");
  return o;
}

Outcome LogdetOracle() {
  const auto t0 = Clock::now();
  ModelConfig m = testing::TinyModel(2, 3, 0, 0, 2, 8, 8);
  Flow flow(m.flow);
  RandomizeParameters(*flow, 0.3, 201);
  flow->to(torch::kFloat64);
  torch::manual_seed(202);
  const int n = 32;
  auto x = torch::randn({1, n}, torch::kFloat64);
  auto cond = testing::RandomCond(m.flow, 1, n / 2, torch::kFloat64);
  torch::NoGradGuard guard;
  const double analytic = flow->Forward(x, cond).logdet.item<double>();
  auto jac = testing::FiniteDifferenceJacobian(
      [&](const torch::Tensor &v) { return flow->Forward(v, cond).z; }, x, 1e-6);
  const double oracle = testing::LogAbsDetLu(jac);
  const double rel = testing::RelErr(analytic, oracle);
  const double secs = Since(t0);
  Outcome o;
  o.Require(rel <= kLogdetRelTol,
            Fmt("analytic %.9g oracle %.9g rel %.2g", analytic, oracle, rel));
  o.Require(secs < kLogdetBudgetS, Fmt("%.1f s", secs));
  return o;
}

std::vector<DiscOutput> ConstOutputs(double score, double feature, int k = 8) {
  std::vector<DiscOutput> out(k);
  for (auto &o : out) {
    o.scores = torch::full({2, 5}, score, torch::kFloat64);
    o.features = {torch::full({2, 3, 7}, feature, torch::kFloat64),
                  torch::full({2, 4}, feature, torch::kFloat64)};
  }
  return out;
}

Outcome LossAnalytics() {
  Outcome o;
  auto near = [&](double got, double want, const std::string &what) {
    o.Require(std::abs(got - want) <= kLossTol,
              what + Fmt(" %.9g vs %.9g", got, want));
  };
  const double half_ln_2pi = 0.5 * std::log(2.0 * std::numbers::pi);

  // NLL per dimension.
  const int n = 48;
  auto z0 = torch::zeros({1, n}, torch::kFloat64);
  near(NllLoss(z0, torch::zeros({1})).item<double>(), half_ln_2pi, "nll z=0");
  near(NllLoss(z0, torch::full({1}, double(n))).item<double>(), half_ln_2pi - 1.0,
       "nll logdet=N");
  torch::manual_seed(301);
  auto r = torch::randn({1, n}, torch::kFloat64);
  const double q1 = NllLoss(r, torch::zeros({1})).item<double>() - half_ln_2pi;
  const double q2 = NllLoss(2 * r, torch::zeros({1})).item<double>() - half_ln_2pi;
  near(q2, 4 * q1, "nll quadratic scaling");
  {
    // Identity network on a standard-normal draw.
    ModelConfig m = testing::TinyModel(12, 2);
    Flow flow(m.flow);
    testing::SetMixingToIdentity(flow);
    auto zz = torch::randn({4, 48000}, torch::kFloat64);
    auto lat = flow->Forward(zz.to(torch::kFloat32), testing::RandomCond(m.flow, 4, 4000));
    const double v = NllLoss(lat.z, lat.logdet).mean().item<double>();
    const double want = 0.5 * (1.0 + std::log(2.0 * std::numbers::pi));
    // Sampling error of the mean of 192000 chi-square(1)/2 terms: sd ~ 0.0016.
    o.Require(std::abs(v - want) < 0.01, Fmt("nll gaussian draw %.5f vs %.5f", v, want));
  }

  // LSGAN.
  auto ones = torch::ones({2, 5}, torch::kFloat64);
  auto zeros = torch::zeros({2, 5}, torch::kFloat64);
  auto halves = torch::full({2, 5}, 0.5, torch::kFloat64);
  near(LsganLosses(ones, zeros).adv_d.item<double>(), 0.0, "adv_d optimum");
  near(LsganLosses(ones, ones).adv_g.item<double>(), 0.0, "adv_g optimum");
  near(LsganLosses(halves, halves).adv_d.item<double>(), 0.5, "adv_d at 0.5");
  near(LsganLosses(halves, halves).adv_g.item<double>(), 0.25, "adv_g at 0.5");

  // Feature matching.
  auto a = ConstOutputs(0.0, 0.0);
  for (auto &d : a)
    for (auto &f : d.features) f = torch::randn_like(f);
  auto b = a;
  for (auto &d : b)
    for (auto &f : d.features) f = f + 0.3;
  near(FeatureMatching(a, a).item<double>(), 0.0, "fm identical");
  near(FeatureMatching(a, b).item<double>(), 0.3, "fm offset");
  near(FeatureMatching(a, b).item<double>(), FeatureMatching(b, a).item<double>(),
       "fm symmetric");

  // MRSTFT identities and the direct-DFT oracle.
  const std::vector<StftResolution> res{{32, 8, 16}, {16, 4, 16}, {64, 16, 32}};
  auto ref = torch::randn({1, 128}, torch::kFloat64);
  near(MrStft(ref, ref, res).item<double>(), 0.0, "mrstft est==ref");
  auto terms = MrStftTerms(ref, torch::zeros_like(ref), res);
  near(terms.spectral_convergence.item<double>(), 1.0, "mrstft sc est=0");
  double worst = 0.0;
  for (int len : {64, 100, 128}) {
    auto rr = torch::randn({1, len}, torch::kFloat64);
    auto ee = rr + 0.3 * torch::randn({1, len}, torch::kFloat64);
    std::vector<double> rv(len), ev(len);
    for (int i = 0; i < len; ++i) {
      rv[i] = rr[0][i].item<double>();
      ev[i] = ee[0][i].item<double>();
    }
    std::vector<testing::OracleRes> ores;
    for (const auto &x : res) ores.push_back({x.fft_size, x.hop, x.window_length});
    const double got = MrStft(rr, ee, res).item<double>();
    const double want = testing::OracleMrStft(rv, ev, ores, 1e-7);
    worst = std::max(worst, std::abs(got - want));
  }
  o.Require(worst <= kLossTol, Fmt("mrstft vs direct DFT max diff %.2g", worst));

  // Generator and discriminator accounting.
  LossConfig lc;
  lc.resolutions = res;
  auto gen = GeneratorLoss(ConstOutputs(1.0, 0.0), ConstOutputs(1.0, 0.0), ref, ref, lc);
  near(gen.total.item<double>(), 0.0, "generator joint optimum");
  auto gen2 = GeneratorLoss(a, b, ref, ref + 0.1 * torch::randn_like(ref), lc);
  double sum = 0.0;
  for (const auto &[k, v] : gen2.components) sum += gen2.weights.at(k) * v.item<double>();
  near(sum, gen2.total.item<double>(), "generator components sum");
  near(DiscriminatorLoss(ConstOutputs(1.0, 0.0), ConstOutputs(0.0, 0.0)).item<double>(),
       0.0, "disc perfect");
  near(DiscriminatorLoss(ConstOutputs(0.5, 0.0), ConstOutputs(0.5, 0.0)).item<double>(),
       4.0, "disc 8 x 0.5");
  {
    auto real = ConstOutputs(0.0, 0.0), fake = ConstOutputs(0.0, 0.0);
    for (size_t k = 0; k < real.size(); ++k) {
      real[k].scores = torch::rand({2, 5}, torch::kFloat64);
      fake[k].scores = torch::rand({2, 5}, torch::kFloat64);
    }
    const double fwd = DiscriminatorLoss(real, fake).item<double>();
    std::reverse(real.begin(), real.end());
    std::reverse(fake.begin(), fake.end());
    near(DiscriminatorLoss(real, fake).item<double>(), fwd, "disc permutation");
  }
  near(HybridLoss(gen2, torch::tensor(2.0, torch::kFloat64), 0.0).item<double>(),
       gen2.total.item<double>(), "hybrid lambda=0");
  LossReport unit;
  unit.total = torch::tensor(1.0, torch::kFloat64);
  near(HybridLoss(unit, torch::tensor(2.0, torch::kFloat64), 0.3).item<double>(), 1.6,
       "hybrid 1.0 + 0.3 x 2.0");
  // Keep the summary short when everything holds.
  if (o.pass) o.detail = "all loss examples within 1e-6; " +
                         Fmt("mrstft vs direct DFT max diff %.2g", worst);
  return o;
}

// Mean per-utterance multi-resolution STFT distance of enhanced training items.
double MeanMrStft(Enhancer model, const std::vector<Utterance> &items,
                  const RunConfig &cfg, uint64_t seed) {
  double acc = 0.0;
  for (const auto &u : items) {
    auto est = Enhance(model, u.noisy, cfg.train.train_temperature, seed);
    auto r = torch::from_blob(const_cast<float *>(u.clean.samples.data()),
                              {1, u.clean.size()}).to(torch::kFloat64);
    auto e = torch::from_blob(est.samples.data(), {1, est.size()})
                 .to(torch::kFloat64);
    acc += MrStft(r, e, cfg.train.loss.resolutions, cfg.train.loss.log_floor).item<double>();
  }
  return acc / items.size();
}

double MeanNll(Enhancer model, const std::vector<Utterance> &items) {
  double acc = 0.0;
  for (const auto &u : items) acc += UtteranceNll(model, u.clean, u.noisy);
  return acc / items.size();
}

struct DeskState {
  std::vector<Utterance> train, val, test;
  Checkpoint nf;
  bool ready = false;
};

Outcome Overfit(DeskState *desk, Checkpoint *gan_last, const std::string &dir) {
  const auto t0 = Clock::now();
  Outcome o;
  Manifest manifest = MakeDeskCorpus(dir, DeskCorpusOptions{});
  desk->train = LoadSplit(manifest, "train", dir);
  desk->val = LoadSplit(manifest, "val", dir);
  desk->test = LoadSplit(manifest, "test", dir);

  const RunConfig cfg = DeskRunConfig(Stage::kNf);
  Trainer nf(cfg, desk->train, desk->val);
  const double nll0 = nf.ValidationNll();
  double best_within = nll0;
  while (nf.global_step() < kNfStepBudget) {
    nf.Step();
    if (!nf.history().empty() && nf.global_step() <= kNfStepBudget)
      best_within = std::min(best_within, nf.history().back().val_nll);
  }
  const double drop = (nll0 - best_within) / std::abs(nll0);
  o.Require(drop >= kNfNllDrop,
            Fmt("nf val nll %.4f -> %.4f within 200 steps (%.1f%%)", nll0, best_within,
                100 * drop));
  TrainResult nf_res = nf.Run();
  desk->nf = nf_res.best;
  desk->ready = true;
  std::printf("  nf stage: %zu epochs, best val nll %.4f at epoch %d\n",
              nf_res.history.size(), nf_res.best.best_val(), nf_res.best.epoch());

  // The MRSTFT component is tracked on the training items at the training
  // temperature with a fixed latent seed; the stage then runs its full
  // schedule before the SI-SDR check.
  const RunConfig gcfg = DeskRunConfig(Stage::kGan);
  Trainer gan(gcfg, desk->train, desk->val, &desk->nf);
  const uint64_t eval_seed = 77;
  const double mr0 = MeanMrStft(gan.generator(), desk->train, gcfg, eval_seed);
  double mr_best = mr0;
  int best_epoch = 0;
  for (int e = 1; e <= gcfg.train.gan_epochs; ++e) {
    auto rec = gan.FinishEpoch();
    double mr = NAN;
    if (e <= kGanEpochBudget) {
      mr = MeanMrStft(gan.generator(), desk->train, gcfg, eval_seed);
      if (mr < mr_best) {
        mr_best = mr;
        best_epoch = e;
      }
    }
    if (e % 10 == 0) {
      std::printf("  gan epoch %d: train mrstft %.4f, adv_d %.3f", e,
                  rec.train.count("mrstft") ? rec.train.at("mrstft") : NAN,
                  rec.train.count("adv_d") ? rec.train.at("adv_d") : NAN);
      if (!std::isnan(mr)) std::printf(", enhanced mrstft %.4f", mr);
      std::printf("\n");
    }
  }
  const double mr_drop = (mr0 - mr_best) / mr0;
  o.Require(mr_drop >= kMrStftDrop,
            Fmt("gan mrstft %.4f -> %.4f (%.1f%%)", mr0, mr_best, 100 * mr_drop) +
                " at epoch " + std::to_string(best_epoch));
  *gan_last = gan.Snapshot();

  Enhancer g = gan.generator();
  int improved = 0;
  double worst = INFINITY;
  for (size_t i = 0; i < desk->train.size(); ++i) {
    const auto &u = desk->train[i];
    auto est = Enhance(g, u.noisy, gcfg.eval.temperature, 1000 + i);
    const double gain = SiSdr(u.clean.samples, est.samples) - SiSdr(u.clean.samples, u.noisy.samples);
    worst = std::min(worst, gain);
    if (gain > 0) ++improved;
  }
  o.Require(improved == static_cast<int>(desk->train.size()),
            Fmt("si-sdr improved on %.0f/%.0f training items (worst %+.2f dB)", improved,
                desk->train.size(), worst));
  const double secs = Since(t0);
  o.Require(secs < kOverfitBudgetS, Fmt("%.0f s", secs));
  return o;
}

Outcome LikelihoodDrift(DeskState *desk, const Checkpoint &gan_last) {
  const auto t0 = Clock::now();
  Outcome o;
  if (!desk->ready) {
    o.Require(false, "nf stage unavailable");
    return o;
  }
  const double nll_nf = MeanNll(LoadEnhancer(desk->nf), desk->test);
  const double nll_gan = MeanNll(LoadEnhancer(gan_last), desk->test);

  const RunConfig cfg = DeskRunConfig(Stage::kHybrid);
  Trainer hybrid(cfg, desk->train, desk->val, &desk->nf);
  for (int e = 0; e < cfg.train.gan_epochs; ++e) hybrid.FinishEpoch();
  const double nll_hyb = MeanNll(hybrid.generator(), desk->test);

  const double d_hyb = std::abs(nll_hyb - nll_nf) / std::abs(nll_nf);
  const double d_gan = std::abs(nll_gan - nll_nf) / std::abs(nll_nf);
  o.Require(d_hyb <= kHybridMaxDrift,
            Fmt("hybrid test nll %.4f vs nf %.4f (drift %.3f)", nll_hyb, nll_nf, d_hyb));
  o.Require(d_gan >= kGanMinDrift, Fmt("gan test nll %.4f (drift %.3f)", nll_gan, d_gan));
  const double secs = Since(t0);
  o.Require(secs < kDriftBudgetS, Fmt("%.0f s", secs));
  return o;
}

Outcome ConditioningCost() {
  const auto t0 = Clock::now();
  Outcome o;
  EvalConfig ev;
  std::mt19937_64 rng(601);
  std::vector<Waveform> files;
  for (int i = 0; i < ev.rtf_files; ++i) {
    ManifestEntry e;
    e.snr_db = SampleSnr(rng);
    auto clean = SyntheticSpeech(1.0, rng);
    files.push_back(Mix(clean, SyntheticNoise(1.0, rng), e).noisy);
  }
  ModelConfig on;
  ModelConfig off;
  off.cond.use_condnet = false;
  Enhancer g_on(on), g_off(off);
  auto r_off = BenchmarkRtf(g_off, files, ev.rtf_warmup);
  auto r_on = BenchmarkRtf(g_on, files, ev.rtf_warmup);
  const double ratio = r_on.rtf / r_off.rtf;
  o.Require(ratio <= kRtfRatioMax, Fmt("rtf %.3f / %.3f = %.2f", r_on.rtf, r_off.rtf, ratio));
  o.Require(r_on.param_count > r_off.param_count,
            Fmt("params %.2fM vs %.2fM", r_on.param_count / 1e6, r_off.param_count / 1e6));
  const double secs = Since(t0);
  o.Require(secs < kRtfBudgetS, Fmt("%.0f s", secs));
  return o;
}

std::string Slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome DataExactness(const std::string &base) {
  Outcome o;
  DeskCorpusOptions opt;
  opt.n_train = 120;
  opt.n_val = 20;
  opt.n_test = 60;
  opt.seconds = 0.5;
  const std::string a = base + "/a", b = base + "/b";
  Manifest ma = MakeDeskCorpus(a, opt);
  Manifest mb = MakeDeskCorpus(b, opt);

  double worst = 0.0;
  bool replay = true;
  for (const auto &e : ma) {
    auto m1 = SynthesizeMixture(e, a);
    auto m2 = SynthesizeMixture(e, a);
    worst = std::max(worst, std::abs(MeasureSnrDb(m1.clean.samples, m1.noisy.samples) - e.snr_db));
    replay = replay && m1.clean.samples == m2.clean.samples &&
             m1.noisy.samples == m2.noisy.samples;
  }
  o.Require(worst <= kSnrTolDb, Fmt("%.0f mixtures, worst snr error %.2g dB", ma.size(),
                                    worst));
  bool same = Slurp(a + "/manifest.jsonl") == Slurp(b + "/manifest.jsonl");
  for (const auto &entry : std::filesystem::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    auto rel = std::filesystem::relative(entry.path(), a);
    same = same && Slurp(entry.path()) == Slurp(std::filesystem::path(b) / rel);
  }
  o.Require(replay, "mixture replay bit-identical");
  o.Require(same, "corpus regeneration byte-identical");
  return o;
}

Outcome GradientCheck() {
  Outcome o;
  ModelConfig m = testing::TinyModel(2, 2, 0, 0, 2, 4, 4);
  Enhancer g(m);
  RandomizeParameters(*g, 0.2, 801);
  g->to(torch::kFloat64);
  torch::manual_seed(802);
  auto x = torch::randn({1, 16}, torch::kFloat64) * 0.5;
  auto y = x + 0.1 * torch::randn({1, 16}, torch::kFloat64);
  auto loss = [&] { return g->LogLikelihood(x, y).sum(); };
  g->zero_grad();
  loss().backward();
  double worst = 0.0;
  int checked = 0;
  for (auto &item : g->named_parameters()) {
    auto p = item.value();
    if (!p.grad().defined()) continue;
    auto grad = p.grad().clone().view(-1);
    for (int64_t i = 0; i < p.numel(); ++i) {
      const double analytic = grad[i].item<double>();
      if (std::abs(analytic) < 1e-7) continue;
      const double eps = 1e-6;
      double plus, minus;
      {
        torch::NoGradGuard guard;
        auto flat = p.view(-1);
        const double orig = flat[i].item<double>();
        flat[i] = orig + eps;
        plus = loss().item<double>();
        flat[i] = orig - eps;
        minus = loss().item<double>();
        flat[i] = orig;
      }
      worst = std::max(worst, testing::RelErr(analytic, (plus - minus) / (2 * eps)));
      ++checked;
    }
  }
  o.Require(checked > 0 && worst <= kGradRelTol,
            Fmt("%.0f parameter entries, worst rel error %.2g", checked, worst));
  return o;
}

using Trajectory = std::vector<std::map<std::string, double>>;

Trajectory Steps(Trainer &t, int n) {
  Trajectory out;
  for (int i = 0; i < n; ++i) out.push_back(t.Step().losses);
  return out;
}

Outcome Determinism(const std::string &dir) {
  Outcome o;
  DeskCorpusOptions opt;
  opt.seed = 901;
  Manifest manifest = MakeDeskCorpus(dir, opt);
  auto train = LoadSplit(manifest, "train", dir);
  auto val = LoadSplit(manifest, "val", dir);
  Checkpoint init;
  {
    RunConfig c = DeskRunConfig(Stage::kNf);
    c.train.seed = 902;
    Trainer t(c, train, val);
    Steps(t, 3);
    init = t.Snapshot();
  }
  for (Stage stage : {Stage::kNf, Stage::kGan, Stage::kHybrid}) {
    RunConfig c = DeskRunConfig(stage);
    c.train.seed = 902;
    const Checkpoint *ip = stage == Stage::kNf ? nullptr : &init;
    Trainer a(c, train, val, ip);
    Trainer b(c, train, val, ip);
    auto ta = Steps(a, kDeterminismSteps);
    auto tb = Steps(b, kDeterminismSteps);

    Trainer first(c, train, val, ip);
    auto tc = Steps(first, kDeterminismSteps / 2);
    const std::string path = dir + "/mid_" + StageName(stage) + ".ckpt";
    SaveCheckpoint(path, first.Snapshot());
    auto resumed = Trainer::Resume(c, train, val, LoadCheckpoint(path));
    auto rest = Steps(*resumed, kDeterminismSteps - kDeterminismSteps / 2);
    tc.insert(tc.end(), rest.begin(), rest.end());
    o.Require(ta == tb, StageName(stage) + " two runs identical");
    o.Require(ta == tc, StageName(stage) + " save/load mid-run identical");
  }
  return o;
}

}  // namespace
}  // namespace sefgan

int main() {
  using namespace sefgan;
  torch::set_num_threads(1);
  testing::TempDir tmp("acceptance");
  std::printf("sefgan acceptance run\n");

  RunCriterion(1, "invertibility", Invertibility);
  RunCriterion(2, "logdet-oracle", LogdetOracle);
  RunCriterion(3, "loss-analytics", LossAnalytics);

  DeskState desk;
  Checkpoint gan_last;
  RunCriterion(4, "overfit", [&] { return Overfit(&desk, &gan_last, tmp.str() + "/desk"); });
  RunCriterion(5, "likelihood-drift", [&] { return LikelihoodDrift(&desk, gan_last); });
  RunCriterion(6, "conditioning-cost", ConditioningCost);
  RunCriterion(7, "data-exactness", [&] { return DataExactness(tmp.str() + "/data"); });
  RunCriterion(8, "gradient-check", GradientCheck);
  RunCriterion(9, "determinism", [&] { return Determinism(tmp.str() + "/det"); });

  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
