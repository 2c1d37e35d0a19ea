// src/audio.cc

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

#include "sefgan/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sefgan/error.h"

namespace sefgan {

void Waveform::Validate() const {
  if (samples.empty()) Fail(ErrorKind::kShape, "waveform is empty");
  if (sample_rate != kSampleRate)
    Fail(ErrorKind::kFormat, "sample rate " + std::to_string(sample_rate) +
                                 " Hz, expected " +
                                 std::to_string(kSampleRate));
  for (float v : samples)
    if (!std::isfinite(v))
      Fail(ErrorKind::kNumerical, "waveform contains non-finite samples");
}

double Energy(std::span<const float> x) {
  double e = 0.0;
  for (float v : x) e += static_cast<double>(v) * v;
  return e;
}

namespace {

uint32_t ReadU32(const unsigned char *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char *p) { return p[0] | (p[1] << 8); }

void PutU32(std::string *s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>(v >> 8));
}

}  // namespace

Waveform ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open wav '" + path + "'");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    Fail(ErrorKind::kFormat, "'" + path + "' is not a RIFF/WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char *data = nullptr;
  size_t data_size = 0;
  size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const unsigned char *chunk = buf.data() + pos;
    uint32_t size = ReadU32(chunk + 4);
    size_t body = pos + 8;
    if (body + size > buf.size()) size = static_cast<uint32_t>(buf.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && size >= 16) {
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
      if (format == 0xFFFE && size >= 40) format = ReadU16(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (data == nullptr || channels == 0)
    Fail(ErrorKind::kFormat, "'" + path + "' lacks fmt or data chunk");
  if (channels != 1)
    Fail(ErrorKind::kFormat, "'" + path + "' has " + std::to_string(channels) +
                                 " channels, expected mono");
  if (rate != kSampleRate)
    Fail(ErrorKind::kFormat, "'" + path + "' sampled at " +
                                 std::to_string(rate) + " Hz, expected " +
                                 std::to_string(kSampleRate));

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  if (format == 1 && bits == 16) {
    size_t n = data_size / 2;
    w.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      int16_t v = static_cast<int16_t>(ReadU16(data + 2 * i));
      w.samples[i] = static_cast<float>(v) / 32768.0f;
    }
  } else if (format == 3 && bits == 32) {
    size_t n = data_size / 4;
    w.samples.resize(n);
    std::memcpy(w.samples.data(), data, n * 4);
  } else {
    Fail(ErrorKind::kFormat, "'" + path + "': unsupported sample format " +
                                 std::to_string(format) + "/" +
                                 std::to_string(bits) + " bit");
  }
  return w;
}

void WriteWav(const std::string &path, const Waveform &w) {
  const uint32_t n = static_cast<uint32_t>(w.samples.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  PutU32(&out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(w.sample_rate));
  PutU32(&out, static_cast<uint32_t>(w.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, 2 * n);
  for (float v : w.samples) {
    float c = std::clamp(v, -1.0f, 1.0f);
    long q = std::lround(c * 32768.0f);
    q = std::clamp(q, -32768L, 32767L);
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) Fail(ErrorKind::kIo, "cannot write wav '" + path + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) Fail(ErrorKind::kIo, "short write to '" + path + "'");
}

torch::Tensor ToTensor(const Waveform &w) {
  return torch::from_blob(const_cast<float *>(w.samples.data()),
                          {w.size()}, torch::kFloat32)
      .clone();
}

Waveform FromTensor(const torch::Tensor &t, int sample_rate) {
  auto flat = t.detach().to(torch::kCPU, torch::kFloat32).contiguous().view(-1);
  const float *p = flat.data_ptr<float>();
  return Waveform(std::vector<float>(p, p + flat.numel()), sample_rate);
}

torch::Tensor PadToMultiple(const torch::Tensor &batch, int factor) {
  int64_t n = batch.size(-1);
  int64_t pad = (factor - n % factor) % factor;
  if (pad == 0) return batch;
  return torch::constant_pad_nd(batch, {0, pad}, 0.0);
}

}  // namespace sefgan
