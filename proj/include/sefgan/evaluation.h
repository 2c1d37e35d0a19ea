// sefgan/evaluation.h

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

#ifndef SEFGAN_EVALUATION_H_
#define SEFGAN_EVALUATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sefgan/audio.h"
#include "sefgan/data.h"
#include "sefgan/model.h"

namespace sefgan {

/// Samples x ~ G(z, noisy) with z ~ N(0, temperature^2 I). The input is zero
/// padded to a multiple of the squeeze factor and the output trimmed back.
/// temperature 0 gives the z = 0 path.
Waveform Enhance(Enhancer &model, const Waveform &noisy, double temperature,
                 uint64_t seed);

/// Scale-invariant SDR in dB. Returns +inf when the residual energy is below
/// 1e-12 of the target energy and -inf for an estimate orthogonal to the
/// reference.
double SiSdr(std::span<const float> ref, std::span<const float> est);

// Sentinel cap applied when averaging.
inline constexpr double kSiSdrCapDb = 100.0;

/// NLL per dimension of one (clean, noisy) pair, padded as in Enhance.
double UtteranceNll(Enhancer &model, const Waveform &clean,
                    const Waveform &noisy);

struct MetricsRow {
  std::string id;
  double snr_db = 0.0;
  double si_sdr_noisy = 0.0;
  double si_sdr_enhanced = 0.0;
  double nll_per_dim = 0.0;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;
};

struct MetricsReport {
  std::vector<MetricsRow> per_file;
  Stat si_sdr_noisy;
  Stat si_sdr_enhanced;
  Stat nll_per_dim;
  std::string model_hash;
  double temperature = 1.0;
  std::string timestamp;

  nlohmann::ordered_json ToJson() const;
  /// One line per file plus a final aggregate line.
  std::string ToJsonl() const;
  std::string SummaryTable() const;
};

/// Recomputes the aggregate fields from per_file (population std).
void Aggregate(MetricsReport *report);

MetricsReport Evaluate(Enhancer &model, const std::vector<Utterance> &items,
                       double temperature, uint64_t seed);

struct NllHistogram {
  double bin_width = 0.05;
  double origin = 0.0;  // left edge of bin 0
  std::vector<int64_t> counts;
  std::vector<double> values;
  double mean = 0.0;

  nlohmann::ordered_json ToJson() const;
};

/// Bins are aligned to multiples of bin_width.
NllHistogram HistogramOf(const std::vector<double> &values, double bin_width);
NllHistogram ComputeNllHistogram(Enhancer &model,
                                 const std::vector<Utterance> &items,
                                 double bin_width);

struct RtfReport {
  int files = 0;
  double audio_seconds = 0.0;
  double wall_seconds = 0.0;
  double rtf = 0.0;
  std::string device;
  int64_t param_count = 0;

  nlohmann::ordered_json ToJson() const;
};

/// Times Enhance over `files` after `warmup` discarded runs (on files[0]).
RtfReport BenchmarkRtf(Enhancer &model, const std::vector<Waveform> &files,
                       int warmup = 2, double temperature = 1.0);

std::string NowIso8601();

}  // namespace sefgan

#endif  // SEFGAN_EVALUATION_H_
