// src/data.cc

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

#include "sefgan/data.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "sefgan/error.h"

namespace sefgan {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string ManifestLine(const ManifestEntry &e) {
  ordered_json j;
  j["clean_path"] = e.clean_path;
  j["noise_path"] = e.noise_path;
  j["noise_offset"] = e.noise_offset;
  j["snr_db"] = e.snr_db;
  j["split"] = e.split;
  j["seed"] = e.seed;
  return j.dump();
}

ManifestEntry ParseManifestLine(const std::string &line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception &e) {
    Fail(ErrorKind::kFormat, std::string("bad manifest line: ") + e.what());
  }
  ManifestEntry e;
  try {
    e.clean_path = j.at("clean_path").get<std::string>();
    e.noise_path = j.at("noise_path").get<std::string>();
    e.noise_offset = j.at("noise_offset").get<int64_t>();
    e.snr_db = j.at("snr_db").get<double>();
    e.split = j.at("split").get<std::string>();
    e.seed = j.at("seed").get<uint64_t>();
  } catch (const json::exception &ex) {
    Fail(ErrorKind::kFormat, std::string("bad manifest record: ") + ex.what());
  }
  if (j.size() != 6)
    Fail(ErrorKind::kFormat, "manifest record has unexpected fields: " + line);
  if (e.split != "train" && e.split != "val" && e.split != "test")
    Fail(ErrorKind::kFormat, "manifest split must be train|val|test, got '" +
                                 e.split + "'");
  if (e.noise_offset < 0)
    Fail(ErrorKind::kFormat, "manifest noise_offset must be >= 0");
  return e;
}

Manifest ReadManifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open manifest '" + path + "'");
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    m.push_back(ParseManifestLine(line));
  }
  return m;
}

void WriteManifest(const std::string &path, const Manifest &manifest) {
  std::ofstream out(path);
  if (!out) Fail(ErrorKind::kIo, "cannot write manifest '" + path + "'");
  for (const auto &e : manifest) out << ManifestLine(e) << '\n';
}

std::vector<ManifestEntry> SelectSplit(const Manifest &m,
                                       const std::string &split) {
  std::vector<ManifestEntry> out;
  for (const auto &e : m) {
    if (split == "test_low") {
      if (e.split == "test" && e.snr_db <= kLowSnrEdgeDb) out.push_back(e);
    } else if (e.split == split) {
      out.push_back(e);
    }
  }
  return out;
}

double ScaleNoiseForSnr(std::span<const float> clean,
                        std::span<const float> noise, double snr_db) {
  if (clean.size() != noise.size())
    Fail(ErrorKind::kShape, "clean and noise lengths differ");
  const double ec = Energy(clean);
  const double en = Energy(noise);
  if (ec <= 0.0) Fail(ErrorKind::kDegenerate, "clean signal has zero energy");
  if (en <= 0.0) Fail(ErrorKind::kDegenerate, "noise signal has zero energy");
  return std::sqrt(ec / (en * std::pow(10.0, snr_db / 10.0)));
}

double MeasureSnrDb(std::span<const float> clean, std::span<const float> noisy) {
  if (clean.size() != noisy.size())
    Fail(ErrorKind::kShape, "clean and noisy lengths differ");
  double ec = 0.0, en = 0.0;
  for (size_t i = 0; i < clean.size(); ++i) {
    double d = static_cast<double>(noisy[i]) - clean[i];
    ec += static_cast<double>(clean[i]) * clean[i];
    en += d * d;
  }
  if (en <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ec / en);
}

Mixture Mix(const Waveform &clean, const Waveform &noise,
            const ManifestEntry &entry, double target_peak) {
  clean.Validate();
  noise.Validate();
  const size_t n = clean.samples.size();
  std::vector<float> cropped(n);
  const size_t len = noise.samples.size();
  const size_t start = static_cast<size_t>(entry.noise_offset) % len;
  for (size_t i = 0; i < n; ++i) cropped[i] = noise.samples[(start + i) % len];

  const double gain = ScaleNoiseForSnr(clean.samples, cropped, entry.snr_db);
  // Mixing in double keeps y - x == g * n exact up to the final rounding.
  std::vector<double> x(n), y(n);
  double peak = 0.0;
  for (size_t i = 0; i < n; ++i) {
    x[i] = clean.samples[i];
    y[i] = x[i] + gain * cropped[i];
    peak = std::max({peak, std::abs(x[i]), std::abs(y[i])});
  }
  const double scale = peak > 0.0 ? target_peak / peak : 1.0;
  Mixture m;
  m.clean.samples.resize(n);
  m.noisy.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    m.clean.samples[i] = static_cast<float>(x[i] * scale);
    m.noisy.samples[i] = static_cast<float>(y[i] * scale);
  }
  return m;
}

Mixture SynthesizeMixture(const ManifestEntry &entry, const std::string &root,
                          double target_peak) {
  auto resolve = [&](const std::string &p) {
    fs::path path(p);
    return (path.is_absolute() || root.empty()) ? path.string()
                                                : (fs::path(root) / path).string();
  };
  Waveform clean = ReadWav(resolve(entry.clean_path));
  Waveform noise = ReadWav(resolve(entry.noise_path));
  return Mix(clean, noise, entry, target_peak);
}

double SampleSnr(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> dist(kMinSnrDb, kMaxSnrDb);
  return dist(rng);
}

SegmentPlan PlanSegments(int64_t length, int64_t seg, SegmentMode mode,
                         std::mt19937_64 *rng) {
  if (seg <= 0) Fail(ErrorKind::kConfig, "segment length must be positive");
  if (length <= 0) Fail(ErrorKind::kShape, "cannot segment an empty signal");
  SegmentPlan plan;
  plan.segment_samples = seg;
  if (length < seg) {
    plan.starts = {0};
    plan.padded = true;
    return plan;
  }
  if (mode == SegmentMode::kEval) {
    for (int64_t s = 0; s < length; s += seg) plan.starts.push_back(s);
    plan.padded = length % seg != 0;
    return plan;
  }
  const int64_t count = length / seg;
  const int64_t slack = length - count * seg;
  int64_t offset = 0;
  if (slack > 0 && rng != nullptr) {
    std::uniform_int_distribution<int64_t> dist(0, slack);
    offset = dist(*rng);
  }
  for (int64_t k = 0; k < count; ++k) plan.starts.push_back(offset + k * seg);
  return plan;
}

std::vector<Waveform> ApplySegments(const Waveform &w, const SegmentPlan &plan) {
  std::vector<Waveform> out;
  out.reserve(plan.starts.size());
  for (int64_t s : plan.starts) {
    std::vector<float> buf(plan.segment_samples, 0.0f);
    const int64_t end = std::min<int64_t>(w.size(), s + plan.segment_samples);
    if (end > s) std::copy(w.samples.begin() + s, w.samples.begin() + end, buf.begin());
    out.emplace_back(std::move(buf), w.sample_rate);
  }
  return out;
}

std::vector<Waveform> Segment(const Waveform &w, int64_t seg, SegmentMode mode,
                              std::mt19937_64 *rng) {
  return ApplySegments(w, PlanSegments(w.size(), seg, mode, rng));
}

std::vector<Utterance> LoadSplit(const Manifest &manifest,
                                 const std::string &split,
                                 const std::string &root, double target_peak) {
  std::vector<Utterance> out;
  int index = 0;
  for (const auto &e : SelectSplit(manifest, split)) {
    Mixture m = SynthesizeMixture(e, root, target_peak);
    char id[64];
    std::snprintf(id, sizeof(id), "%s_%03d", split.c_str(), index++);
    out.push_back({id, e.snr_db, std::move(m.clean), std::move(m.noisy)});
  }
  return out;
}

namespace {

void NormalizeRms(std::vector<float> *x, double rms) {
  double e = Energy(*x);
  if (e <= 0.0) return;
  const double g = rms / std::sqrt(e / x->size());
  for (float &v : *x) v = static_cast<float>(v * g);
}

}  // namespace

Waveform SyntheticSpeech(double seconds, std::mt19937_64 &rng) {
  const int n = static_cast<int>(std::lround(seconds * kSampleRate));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double f0_start = 100.0 + 120.0 * u(rng);
  const double f0_end = f0_start * (0.7 + 0.6 * u(rng));
  const double vib_rate = 4.0 + 3.0 * u(rng);
  const double formants[3] = {400.0 + 500.0 * u(rng), 1100.0 + 900.0 * u(rng),
                              2300.0 + 800.0 * u(rng)};
  const int syllables = std::max(1, static_cast<int>(std::lround(seconds * (3.0 + 2.0 * u(rng)))));

  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<float> out(n, 0.0f);
  double phase = 0.0;
  double breath = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    const double frac = static_cast<double>(i) / n;
    const double f0 = (f0_start + (f0_end - f0_start) * frac) *
                      (1.0 + 0.03 * std::sin(two_pi * vib_rate * t));
    phase += two_pi * f0 / kSampleRate;
    double v = 0.0;
    for (int k = 1; k * f0 < 7600.0; ++k) {
      const double fk = k * f0;
      double amp = 0.0;
      for (int m = 0; m < 3; ++m) {
        const double d = (fk - formants[m]) / (150.0 + 100.0 * m);
        amp += std::exp(-0.5 * d * d) / (m + 1);
      }
      v += (amp + 0.3 / k) * std::sin(k * phase);
    }
    // Syllables: raised-cosine bursts separated by short gaps.
    const double pos = frac * syllables;
    const double within = pos - std::floor(pos);
    const double env = within < 0.8 ? std::sin(std::numbers::pi * within / 0.8) : 0.0;
    // Aspiration: first-difference of white noise, present in the gaps too.
    const double w = g(rng);
    const double asp = w - breath;
    breath = w;
    out[i] = static_cast<float>(v * env * env + 0.04 * asp * (0.1 + env));
  }
  NormalizeRms(&out, 0.1);
  return Waveform(std::move(out));
}

Waveform SyntheticNoise(double seconds, std::mt19937_64 &rng) {
  const int n = static_cast<int>(std::lround(seconds * kSampleRate));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  // Band-limited noise: difference of two one-pole lowpass filters.
  const double a_hi = 0.3 + 0.65 * u(rng);
  const double a_lo = 0.995 + 0.004 * u(rng);
  const double mod_rate = 0.5 + 2.0 * u(rng);
  const double mod_depth = 0.5 * u(rng);
  std::vector<float> out(n);
  double lp1 = 0.0, lp2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = g(rng);
    lp1 = a_hi * lp1 + (1.0 - a_hi) * w;
    lp2 = a_lo * lp2 + (1.0 - a_lo) * w;
    const double env = 1.0 + mod_depth * std::sin(2.0 * std::numbers::pi *
                                                  mod_rate * i / kSampleRate);
    out[i] = static_cast<float>((lp1 - lp2) * env);
  }
  NormalizeRms(&out, 0.1);
  return Waveform(std::move(out));
}

Manifest MakeDeskCorpus(const std::string &dir, const DeskCorpusOptions &opt) {
  if (opt.n_train < 0 || opt.n_val < 0 || opt.n_test < 0 || opt.n_noises < 1 ||
      opt.seconds <= 0.0)
    Fail(ErrorKind::kConfig, "bad desk corpus options");
  fs::create_directories(fs::path(dir) / "clean");
  fs::create_directories(fs::path(dir) / "noise");
  std::mt19937_64 rng(opt.seed);

  std::vector<std::string> noise_paths;
  const double noise_seconds = opt.seconds * 1.5;
  for (int k = 0; k < opt.n_noises; ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "noise/noise_%03d.wav", k);
    WriteWav((fs::path(dir) / name).string(), SyntheticNoise(noise_seconds, rng));
    noise_paths.push_back(name);
  }

  Manifest manifest;
  const int total = opt.n_train + opt.n_val + opt.n_test;
  const int64_t noise_len = std::lround(noise_seconds * kSampleRate);
  for (int i = 0; i < total; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "clean/utt_%03d.wav", i);
    WriteWav((fs::path(dir) / name).string(), SyntheticSpeech(opt.seconds, rng));
    ManifestEntry e;
    e.clean_path = name;
    e.noise_path = noise_paths[i % noise_paths.size()];
    e.noise_offset = std::uniform_int_distribution<int64_t>(0, noise_len - 1)(rng);
    e.snr_db = SampleSnr(rng);
    e.split = i < opt.n_train ? "train" : (i < opt.n_train + opt.n_val ? "val" : "test");
    e.seed = opt.seed * 1000003ULL + static_cast<uint64_t>(i);
    manifest.push_back(e);
  }
  WriteManifest((fs::path(dir) / "manifest.jsonl").string(), manifest);
  return manifest;
}

}  // namespace sefgan
