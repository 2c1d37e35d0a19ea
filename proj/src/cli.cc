// src/cli.cc

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

#include "sefgan/cli.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "sefgan/config.h"
#include "sefgan/data.h"
#include "sefgan/evaluation.h"
#include "sefgan/training.h"

namespace sefgan {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
    case ErrorKind::kIo:
    case ErrorKind::kVersion:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

std::string FormatErrorLine(std::string_view kind, const std::string &msg) {
  std::string esc;
  for (char c : msg) {
    if (c == '"' || c == '\\') esc += '\\';
    if (c == '\n') {
      esc += "\\n";
      continue;
    }
    esc += c;
  }
  return "error kind=" + std::string(kind) + " msg=\"" + esc + "\"";
}

namespace {

struct Options {
  std::string config;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string ckpt;
  std::string init;
  std::string out;
  std::string device = "cpu";
  std::string manifest;
  std::string root;
  std::string in;
  std::string split;
  double temperature = -1.0;  // <0: use config
  int n_files = 0;
};

void RequireFile(const std::string &path, const std::string &flag) {
  if (path.empty()) Fail(ErrorKind::kUsage, flag + " is required");
  if (!fs::exists(path))
    Fail(ErrorKind::kIo, flag + " file '" + path + "' does not exist");
}

RunConfig ResolveConfig(const Options &o) {
  RunConfig cfg;
  if (!o.config.empty()) {
    RequireFile(o.config, "--config");
    cfg = LoadRunConfig(o.config);
  }
  if (o.seed_set) cfg.train.seed = o.seed;
  if (!o.manifest.empty()) cfg.data.manifest = o.manifest;
  if (!o.root.empty()) cfg.data.root = o.root;
  if (cfg.data.root.empty() && !cfg.data.manifest.empty())
    cfg.data.root = fs::path(cfg.data.manifest).parent_path().string();
  if (o.temperature >= 0.0) cfg.eval.temperature = o.temperature;
  if (!o.split.empty()) cfg.eval.split = o.split;
  if (o.device != "cpu")
    Fail(ErrorKind::kUsage, "device '" + o.device +
                                "' is not available; this build runs on cpu");
  cfg.Validate();
  return cfg;
}

std::string Timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  localtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

fs::path MakeRunDir(const std::string &cmd) {
  const char *env = std::getenv("SEFGAN_RUN_DIR");
  fs::path root = env != nullptr && *env != '\0' ? fs::path(env) : fs::path("runs");
  fs::path dir = root / (cmd + "-" + Timestamp() + "-" + std::to_string(getpid()));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create run directory '" + dir.string() + "'");
  return dir;
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) Fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << text;
}

class JsonlLog {
 public:
  explicit JsonlLog(const fs::path &path) : out_(path) {
    if (!out_) Fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  }
  void Write(const ordered_json &j) {
    out_ << j.dump() << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
};

fs::path SnapshotConfig(const std::string &cmd, const RunConfig &cfg,
                        const ordered_json &extra = ordered_json::object()) {
  fs::path dir = MakeRunDir(cmd);
  ordered_json j = ToJson(cfg);
  if (!extra.empty()) j["invocation"] = extra;
  WriteText(dir / "config.json", j.dump(2) + "\n");
  return dir;
}

Manifest LoadManifestFor(const RunConfig &cfg) {
  if (cfg.data.manifest.empty()) Fail(ErrorKind::kUsage, "--manifest is required");
  RequireFile(cfg.data.manifest, "--manifest");
  return ReadManifest(cfg.data.manifest);
}

int CmdMakeDeskCorpus(const Options &o) {
  if (o.out.empty()) Fail(ErrorKind::kUsage, "--out is required");
  DeskCorpusOptions opt;
  if (o.seed_set) opt.seed = o.seed;
  Manifest m = MakeDeskCorpus(o.out, opt);
  std::cout << "wrote " << m.size() << " entries to "
            << (fs::path(o.out) / "manifest.jsonl").string() << "\n";
  return kExitOk;
}

int CmdMixDataset(const Options &o) {
  RunConfig cfg = ResolveConfig(o);
  Manifest m = LoadManifestFor(cfg);
  fs::path run = SnapshotConfig("mix-dataset", cfg);
  fs::path out = o.out.empty() ? run / "dataset" : fs::path(o.out);
  fs::create_directories(out / "clean");
  fs::create_directories(out / "noisy");
  JsonlLog report(out / "snr_report.jsonl");
  double worst = 0.0;
  for (size_t i = 0; i < m.size(); ++i) {
    Mixture mix = SynthesizeMixture(m[i], cfg.data.root, cfg.data.target_peak);
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.wav", i);
    WriteWav((out / "clean" / name).string(), mix.clean);
    WriteWav((out / "noisy" / name).string(), mix.noisy);
    const double measured = MeasureSnrDb(mix.clean.samples, mix.noisy.samples);
    worst = std::max(worst, std::abs(measured - m[i].snr_db));
    report.Write({{"index", i},
                  {"split", m[i].split},
                  {"file", name},
                  {"snr_db", m[i].snr_db},
                  {"measured_snr_db", measured}});
  }
  std::cout << "mixed " << m.size() << " entries into " << out.string()
            << " (max |snr error| " << worst << " dB)\n";
  return kExitOk;
}

int CmdTrain(const Options &o, Stage stage) {
  RunConfig cfg = ResolveConfig(o);
  cfg.train.stage = stage;
  cfg.Validate();
  std::optional<Checkpoint> init, resume;
  if (!o.ckpt.empty()) {
    RequireFile(o.ckpt, "--ckpt");
    resume = LoadCheckpoint(o.ckpt);
  } else if (stage != Stage::kNf) {
    if (o.init.empty())
      Fail(ErrorKind::kConfig, StageName(stage) +
                                   " training requires --init with an nf-stage "
                                   "checkpoint");
    RequireFile(o.init, "--init");
    init = LoadCheckpoint(o.init);
  }
  Manifest m = LoadManifestFor(cfg);
  auto train = LoadSplit(m, "train", cfg.data.root, cfg.data.target_peak);
  auto val = LoadSplit(m, "val", cfg.data.root, cfg.data.target_peak);

  const std::string cmd = "train-" + StageName(stage);
  fs::path run = SnapshotConfig(
      cmd, cfg, {{"init", o.init}, {"resume", o.ckpt}, {"out", o.out}});
  JsonlLog log(run / "log.jsonl");

  std::unique_ptr<Trainer> trainer =
      resume ? Trainer::Resume(cfg, train, val, *resume)
             : std::make_unique<Trainer>(cfg, train, val, init ? &*init : nullptr);
  trainer->set_log_sink([&](const ordered_json &j) {
    log.Write(j);
    if (j.value("type", "") == "epoch")
      std::cout << "epoch " << j["epoch"] << " val_nll " << j["val_nll"]
                << (j.contains("val_mrstft")
                        ? " val_mrstft " + j["val_mrstft"].dump()
                        : std::string())
                << "\n";
    else if (j.value("type", "") == "warning")
      std::cerr << "warning: " << j["message"].get<std::string>() << "\n";
  });
  TrainResult r = trainer->Run();
  const fs::path best = o.out.empty() ? run / "best.ckpt" : fs::path(o.out);
  SaveCheckpoint(best.string(), r.best);
  SaveCheckpoint((run / "last.ckpt").string(), r.last);
  std::cout << "best checkpoint (" << r.best.epoch() << " epochs) -> "
            << best.string() << "\n";
  return kExitOk;
}

Enhancer ModelFromCkpt(const Options &o) {
  RequireFile(o.ckpt, "--ckpt");
  return LoadEnhancer(LoadCheckpoint(o.ckpt));
}

int CmdEnhance(const Options &o) {
  RunConfig cfg = ResolveConfig(o);
  Enhancer model = ModelFromCkpt(o);
  RequireFile(o.in, "--in");
  if (o.out.empty()) Fail(ErrorKind::kUsage, "--out is required");
  Waveform noisy = ReadWav(o.in);
  Waveform est = Enhance(model, noisy, cfg.eval.temperature, cfg.train.seed);
  WriteWav(o.out, est);
  std::cout << "enhanced " << noisy.Seconds() << " s -> " << o.out << "\n";
  return kExitOk;
}

int CmdEvaluate(const Options &o) {
  RunConfig cfg = ResolveConfig(o);
  Enhancer model = ModelFromCkpt(o);
  Manifest m = LoadManifestFor(cfg);
  auto items = LoadSplit(m, cfg.eval.split, cfg.data.root, cfg.data.target_peak);
  if (items.empty())
    Fail(ErrorKind::kConfig, "split '" + cfg.eval.split + "' has no entries");
  fs::path run = SnapshotConfig("evaluate", cfg, {{"ckpt", o.ckpt}});
  MetricsReport r = Evaluate(model, items, cfg.eval.temperature, cfg.train.seed);
  const fs::path out = o.out.empty() ? run / "metrics.jsonl" : fs::path(o.out);
  WriteText(out, r.ToJsonl());
  std::cout << r.SummaryTable();
  return kExitOk;
}

int CmdLikelihood(const Options &o) {
  RunConfig cfg = ResolveConfig(o);
  Enhancer model = ModelFromCkpt(o);
  Manifest m = LoadManifestFor(cfg);
  auto items = LoadSplit(m, cfg.eval.split, cfg.data.root, cfg.data.target_peak);
  if (items.empty())
    Fail(ErrorKind::kConfig, "split '" + cfg.eval.split + "' has no entries");
  fs::path run = SnapshotConfig("likelihood", cfg, {{"ckpt", o.ckpt}});
  NllHistogram h = ComputeNllHistogram(model, items, cfg.eval.bin_width);
  const fs::path out = o.out.empty() ? run / "nll_histogram.json" : fs::path(o.out);
  WriteText(out, h.ToJson().dump(2) + "\n");
  std::cout << "mean nll/dim " << h.mean << " over " << items.size()
            << " utterances -> " << out.string() << "\n";
  return kExitOk;
}

int CmdBenchRtf(const Options &o) {
  RunConfig cfg = ResolveConfig(o);
  Enhancer model{nullptr};
  if (!o.ckpt.empty()) {
    model = ModelFromCkpt(o);
  } else {
    torch::manual_seed(cfg.train.seed);
    model = Enhancer(cfg.model);
  }
  const int n = o.n_files > 0 ? o.n_files : cfg.eval.rtf_files;
  std::vector<Waveform> files;
  if (!cfg.data.manifest.empty()) {
    Manifest m = LoadManifestFor(cfg);
    for (auto &u : LoadSplit(m, cfg.eval.split, cfg.data.root, cfg.data.target_peak)) {
      if (static_cast<int>(files.size()) == n) break;
      files.push_back(u.noisy);
    }
  } else {
    std::mt19937_64 rng(cfg.train.seed);
    for (int i = 0; i < n; ++i) {
      Waveform s = SyntheticSpeech(4.0, rng);
      Waveform v = SyntheticNoise(4.0, rng);
      for (size_t k = 0; k < s.samples.size(); ++k) s.samples[k] += v.samples[k];
      files.push_back(s);
    }
  }
  fs::path run = SnapshotConfig("bench-rtf", cfg, {{"ckpt", o.ckpt}});
  RtfReport r = BenchmarkRtf(model, files, cfg.eval.rtf_warmup, cfg.eval.temperature);
  WriteText(o.out.empty() ? run / "rtf.jsonl" : fs::path(o.out),
            r.ToJson().dump() + "\n");
  std::cout << "rtf " << r.rtf << " (" << r.wall_seconds << " s for "
            << r.audio_seconds << " s audio, " << r.param_count
            << " parameters, " << r.device << ")\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char *const *argv) {
  CLI::App app{"Flow-based speech enhancement with adversarial refinement",
               "sefgan"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "run config (JSON)");
    sub->add_option_function<uint64_t>(
        "--seed", [&](const uint64_t &v) { o.seed = v, o.seed_set = true; },
        "random seed");
    sub->add_option("--out", o.out, "output path");
    sub->add_option("--device", o.device, "compute device")->default_str("cpu");
  };
  auto with_manifest = [&](CLI::App *sub) {
    sub->add_option("--manifest", o.manifest, "mixture manifest (JSONL)");
    sub->add_option("--root", o.root, "root for relative manifest paths");
  };

  auto *desk = app.add_subcommand("make-desk-corpus", "write the synthetic corpus");
  common(desk);
  auto *mix = app.add_subcommand("mix-dataset", "synthesize mixtures from a manifest");
  common(mix);
  with_manifest(mix);

  std::vector<std::pair<CLI::App *, Stage>> trains;
  for (Stage st : {Stage::kNf, Stage::kGan, Stage::kHybrid}) {
    auto *t = app.add_subcommand("train-" + StageName(st), StageName(st) + " stage training");
    common(t);
    with_manifest(t);
    t->add_option("--init", o.init, "nf-stage checkpoint to start from");
    t->add_option("--ckpt", o.ckpt, "checkpoint of this stage to resume");
    trains.emplace_back(t, st);
  }

  auto *enh = app.add_subcommand("enhance", "enhance one wav file");
  common(enh);
  enh->add_option("--ckpt", o.ckpt, "model checkpoint");
  enh->add_option("--in", o.in, "noisy wav");
  enh->add_option("--temperature", o.temperature, "latent standard deviation");

  auto *eval = app.add_subcommand("evaluate", "SI-SDR and NLL over a split");
  auto *lik = app.add_subcommand("likelihood", "NLL/dim histogram over a split");
  for (auto *sub : {eval, lik}) {
    common(sub);
    with_manifest(sub);
    sub->add_option("--ckpt", o.ckpt, "model checkpoint");
    sub->add_option("--split", o.split, "train, val, test or test_low");
  }
  eval->add_option("--temperature", o.temperature, "latent standard deviation");

  auto *bench = app.add_subcommand("bench-rtf", "real-time factor benchmark");
  common(bench);
  with_manifest(bench);
  bench->add_option("--ckpt", o.ckpt, "model checkpoint (random weights if absent)");
  bench->add_option("--split", o.split, "manifest split to time");
  bench->add_option("--files", o.n_files, "number of files");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::Success &e) {
      return app.exit(e);
    } catch (const CLI::ParseError &e) {
      std::cerr << FormatErrorLine(ErrorKindName(ErrorKind::kUsage), e.what()) << "\n";
      return kExitUsage;
    }
    if (desk->parsed()) return CmdMakeDeskCorpus(o);
    if (mix->parsed()) return CmdMixDataset(o);
    for (auto &[t, st] : trains)
      if (t->parsed()) return CmdTrain(o, st);
    if (enh->parsed()) return CmdEnhance(o);
    if (eval->parsed()) return CmdEvaluate(o);
    if (lik->parsed()) return CmdLikelihood(o);
    if (bench->parsed()) return CmdBenchRtf(o);
    Fail(ErrorKind::kUsage, "no subcommand");
  } catch (const Error &e) {
    std::cerr << FormatErrorLine(ErrorKindName(e.kind()), e.what()) << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    std::cerr << FormatErrorLine("internal", e.what()) << "\n";
    return kExitRuntime;
  }
}

}  // namespace sefgan
