// sefgan/data.h

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

// Mixture synthesis. A manifest lists (clean file, noise file, noise offset,
// SNR, split, seed) records, one JSON object per line with the fields in
// exactly that order. Synthesis crops (and loops) the noise to the clean
// length, scales it to the requested SNR, adds it, and peak-normalizes clean
// and noisy jointly so the SNR relation is untouched.

#ifndef SEFGAN_DATA_H_
#define SEFGAN_DATA_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sefgan/audio.h"

namespace sefgan {

inline constexpr double kMinSnrDb = 0.0;
inline constexpr double kMaxSnrDb = 20.0;
// Upper edge of the low-SNR test subset (lowest third of the SNR range).
inline constexpr double kLowSnrEdgeDb = kMaxSnrDb / 3.0;

struct ManifestEntry {
  std::string clean_path;
  std::string noise_path;
  int64_t noise_offset = 0;
  double snr_db = 0.0;
  std::string split = "train";
  uint64_t seed = 0;
};

using Manifest = std::vector<ManifestEntry>;

Manifest ReadManifest(const std::string &path);
void WriteManifest(const std::string &path, const Manifest &manifest);
std::string ManifestLine(const ManifestEntry &e);
ManifestEntry ParseManifestLine(const std::string &line);

/// Entries of one split. "test_low" selects test entries with
/// snr_db <= kLowSnrEdgeDb.
std::vector<ManifestEntry> SelectSplit(const Manifest &m,
                                       const std::string &split);

/// Gain g such that clean + g * noise has the requested SNR.
double ScaleNoiseForSnr(std::span<const float> clean,
                        std::span<const float> noise, double snr_db);

/// 10 log10(E_clean / E_(noisy - clean)).
double MeasureSnrDb(std::span<const float> clean, std::span<const float> noisy);

struct Mixture {
  Waveform clean;
  Waveform noisy;
};

/// Mixes already loaded signals according to `entry` (paths unused).
Mixture Mix(const Waveform &clean, const Waveform &noise,
            const ManifestEntry &entry, double target_peak = 0.95);

/// Loads the entry's files (relative paths resolve against `root`) and mixes.
Mixture SynthesizeMixture(const ManifestEntry &entry, const std::string &root,
                          double target_peak = 0.95);

/// Uniform on [kMinSnrDb, kMaxSnrDb].
double SampleSnr(std::mt19937_64 &rng);

enum class SegmentMode { kTrain, kEval };

struct SegmentPlan {
  std::vector<int64_t> starts;
  int64_t segment_samples = 0;
  bool padded = false;  // at least one segment reaches past the signal end
};

/// Non-overlapping segment starts. Training: random global offset, trailing
/// remainder dropped. Eval: starts at 0, the last partial segment is kept and
/// zero padded. Signals shorter than one segment yield one padded segment.
SegmentPlan PlanSegments(int64_t length, int64_t segment_samples,
                         SegmentMode mode, std::mt19937_64 *rng = nullptr);

/// Cuts `w` per the plan, zero padding past the end.
std::vector<Waveform> ApplySegments(const Waveform &w, const SegmentPlan &plan);

std::vector<Waveform> Segment(const Waveform &w, int64_t segment_samples,
                              SegmentMode mode, std::mt19937_64 *rng = nullptr);

struct Utterance {
  std::string id;
  double snr_db = 0.0;
  Waveform clean;
  Waveform noisy;
};

/// Synthesizes every entry of `split` in manifest order. Ids are
/// "<split>_<index>" with the index counted within the split.
std::vector<Utterance> LoadSplit(const Manifest &manifest,
                                 const std::string &split,
                                 const std::string &root,
                                 double target_peak = 0.95);

struct DeskCorpusOptions {
  int n_train = 10;
  int n_val = 2;
  int n_test = 4;
  double seconds = 1.0;
  int n_noises = 4;
  uint64_t seed = 1234;
};

/// Writes a synthetic corpus to `dir`: harmonic chirp "speech" with syllable
/// envelopes in clean/, filtered-noise backgrounds in noise/, and
/// manifest.jsonl with SNRs drawn uniformly from [0, 20] dB. Returns the
/// manifest (paths relative to `dir`).
Manifest MakeDeskCorpus(const std::string &dir, const DeskCorpusOptions &opt);

/// Generators behind the desk corpus, usable without touching disk.
Waveform SyntheticSpeech(double seconds, std::mt19937_64 &rng);
Waveform SyntheticNoise(double seconds, std::mt19937_64 &rng);

}  // namespace sefgan

#endif  // SEFGAN_DATA_H_
