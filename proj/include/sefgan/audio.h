// sefgan/audio.h

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

#ifndef SEFGAN_AUDIO_H_
#define SEFGAN_AUDIO_H_

#include <span>
#include <string>
#include <vector>

#include <torch/torch.h>

namespace sefgan {

inline constexpr int kSampleRate = 16000;

/// Mono 16 kHz signal. Used for clean speech, noise, noisy mixtures and
/// enhanced estimates alike.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = kSampleRate;

  Waveform() = default;
  explicit Waveform(std::vector<float> s, int rate = kSampleRate)
      : samples(std::move(s)), sample_rate(rate) {}

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  double Seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  // Throws unless non-empty, finite and at 16 kHz.
  void Validate() const;
};

double Energy(std::span<const float> x);

/// Reads a mono 16-bit PCM (or 32-bit float) RIFF/WAVE file.
Waveform ReadWav(const std::string &path);
/// Writes 16-bit PCM, little endian. Samples are clipped to [-1, 1].
void WriteWav(const std::string &path, const Waveform &w);

/// [N] float tensor sharing nothing with `w`.
torch::Tensor ToTensor(const Waveform &w);
/// Accepts any 1-D tensor (or [1, N]); converts to float.
Waveform FromTensor(const torch::Tensor &t, int sample_rate = kSampleRate);

/// Trailing zero padding to a multiple of `factor`. Returns the padded signal;
/// the original length is `w.size()`.
torch::Tensor PadToMultiple(const torch::Tensor &batch, int factor);

}  // namespace sefgan

#endif  // SEFGAN_AUDIO_H_
