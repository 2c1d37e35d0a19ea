// src/evaluation.cc

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

#include "sefgan/evaluation.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sefgan/error.h"

namespace sefgan {

using nlohmann::ordered_json;

Waveform Enhance(Enhancer &model, const Waveform &noisy, double temperature,
                 uint64_t seed) {
  noisy.Validate();
  if (temperature < 0.0 || !std::isfinite(temperature))
    Fail(ErrorKind::kConfig, "temperature must be finite and >= 0");
  torch::NoGradGuard guard;
  model->eval();
  const int s = model->squeeze_factor();
  auto y = PadToMultiple(ToTensor(noisy).unsqueeze(0), s);
  torch::Tensor z;
  if (temperature == 0.0) {
    z = torch::zeros({1, s, y.size(1) / s});
  } else {
    auto gen = at::make_generator<at::CPUGeneratorImpl>(seed);
    z = torch::randn({1, s, y.size(1) / s}, gen, y.options()) * temperature;
  }
  auto x = model->Inverse(z, y).narrow(1, 0, noisy.size()).squeeze(0);
  return FromTensor(x);
}

double SiSdr(std::span<const float> ref, std::span<const float> est) {
  if (ref.size() != est.size())
    Fail(ErrorKind::kLength, "si_sdr: reference has " +
                                 std::to_string(ref.size()) +
                                 " samples, estimate " +
                                 std::to_string(est.size()));
  double rr = 0.0, er = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    rr += static_cast<double>(ref[i]) * ref[i];
    er += static_cast<double>(est[i]) * ref[i];
  }
  if (rr == 0.0) Fail(ErrorKind::kDegenerate, "si_sdr: reference is silent");
  const double alpha = er / rr;
  double tt = 0.0, ee = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    const double t = alpha * ref[i];
    const double e = est[i] - t;
    tt += t * t;
    ee += e * e;
  }
  if (tt == 0.0) return -std::numeric_limits<double>::infinity();
  if (ee < 1e-12 * tt) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(tt / ee);
}

double UtteranceNll(Enhancer &model, const Waveform &clean,
                    const Waveform &noisy) {
  torch::NoGradGuard guard;
  model->eval();
  const int s = model->squeeze_factor();
  auto x = PadToMultiple(ToTensor(clean).unsqueeze(0), s);
  auto y = PadToMultiple(ToTensor(noisy).unsqueeze(0), s);
  return model->LogLikelihood(x, y).item<double>();
}

namespace {

Stat Summarize(const std::vector<double> &v) {
  Stat st;
  if (v.empty()) return st;
  for (double x : v) st.mean += x;
  st.mean /= static_cast<double>(v.size());
  for (double x : v) st.std += (x - st.mean) * (x - st.mean);
  st.std = std::sqrt(st.std / static_cast<double>(v.size()));
  return st;
}

double Capped(double db) { return std::min(db, kSiSdrCapDb); }

// JSON has no infinity; the sentinel is written as the string "inf".
ordered_json DbValue(double db) {
  if (std::isinf(db)) return db > 0 ? "inf" : "-inf";
  return db;
}

ordered_json StatJson(const Stat &s) { return {{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

void Aggregate(MetricsReport *r) {
  std::vector<double> noisy, enh, nll;
  for (const auto &row : r->per_file) {
    noisy.push_back(Capped(row.si_sdr_noisy));
    enh.push_back(Capped(row.si_sdr_enhanced));
    nll.push_back(row.nll_per_dim);
  }
  r->si_sdr_noisy = Summarize(noisy);
  r->si_sdr_enhanced = Summarize(enh);
  r->nll_per_dim = Summarize(nll);
}

MetricsReport Evaluate(Enhancer &model, const std::vector<Utterance> &items,
                       double temperature, uint64_t seed) {
  MetricsReport r;
  r.model_hash = ModelConfigHash(model->config());
  r.temperature = temperature;
  r.timestamp = NowIso8601();
  for (size_t i = 0; i < items.size(); ++i) {
    const auto &u = items[i];
    MetricsRow row;
    row.id = u.id;
    row.snr_db = u.snr_db;
    row.si_sdr_noisy = SiSdr(u.clean.samples, u.noisy.samples);
    Waveform est = Enhance(model, u.noisy, temperature, seed + i);
    row.si_sdr_enhanced = SiSdr(u.clean.samples, est.samples);
    row.nll_per_dim = UtteranceNll(model, u.clean, u.noisy);
    r.per_file.push_back(row);
  }
  Aggregate(&r);
  return r;
}

ordered_json MetricsReport::ToJson() const {
  ordered_json files = ordered_json::array();
  for (const auto &row : per_file)
    files.push_back({{"id", row.id},
                     {"snr_db", row.snr_db},
                     {"si_sdr_noisy", DbValue(row.si_sdr_noisy)},
                     {"si_sdr_enhanced", DbValue(row.si_sdr_enhanced)},
                     {"nll_per_dim", row.nll_per_dim}});
  return {{"per_file", files},
          {"aggregate",
           {{"si_sdr_noisy", StatJson(si_sdr_noisy)},
            {"si_sdr_enhanced", StatJson(si_sdr_enhanced)},
            {"nll_per_dim", StatJson(nll_per_dim)}}},
          {"metadata",
           {{"model_hash", model_hash},
            {"temperature", temperature},
            {"timestamp", timestamp}}}};
}

std::string MetricsReport::ToJsonl() const {
  const auto j = ToJson();
  std::string out;
  for (const auto &row : j["per_file"]) {
    ordered_json line = {{"type", "file"}};
    line.update(row);
    out += line.dump() + "\n";
  }
  ordered_json agg = {{"type", "aggregate"}, {"files", per_file.size()}};
  agg.update(j["aggregate"]);
  agg.update(j["metadata"]);
  out += agg.dump() + "\n";
  return out;
}

std::string MetricsReport::SummaryTable() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << std::left << std::setw(14) << "id" << std::right << std::setw(9)
     << "snr" << std::setw(12) << "sisdr_in" << std::setw(12) << "sisdr_out"
     << std::setw(10) << "nll" << "\n";
  for (const auto &r : per_file)
    os << std::left << std::setw(14) << r.id << std::right << std::setw(9)
       << r.snr_db << std::setw(12) << r.si_sdr_noisy << std::setw(12)
       << r.si_sdr_enhanced << std::setw(10) << std::setprecision(4)
       << r.nll_per_dim << std::setprecision(2) << "\n";
  os << std::left << std::setw(14) << "mean" << std::right << std::setw(9) << ""
     << std::setw(12) << si_sdr_noisy.mean << std::setw(12)
     << si_sdr_enhanced.mean << std::setw(10) << std::setprecision(4)
     << nll_per_dim.mean << "\n";
  return os.str();
}

NllHistogram HistogramOf(const std::vector<double> &values, double bin_width) {
  if (!(bin_width > 0.0)) Fail(ErrorKind::kConfig, "bin_width must be > 0");
  NllHistogram h;
  h.bin_width = bin_width;
  h.values = values;
  if (values.empty()) return h;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) Fail(ErrorKind::kNumerical, "non-finite NLL value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    h.mean += v;
  }
  h.mean /= static_cast<double>(values.size());
  const int64_t first = static_cast<int64_t>(std::floor(lo / bin_width));
  const int64_t last = static_cast<int64_t>(std::floor(hi / bin_width));
  h.origin = static_cast<double>(first) * bin_width;
  h.counts.assign(last - first + 1, 0);
  for (double v : values)
    ++h.counts[static_cast<int64_t>(std::floor(v / bin_width)) - first];
  return h;
}

NllHistogram ComputeNllHistogram(Enhancer &model,
                                 const std::vector<Utterance> &items,
                                 double bin_width) {
  std::vector<double> values;
  for (const auto &u : items) values.push_back(UtteranceNll(model, u.clean, u.noisy));
  return HistogramOf(values, bin_width);
}

ordered_json NllHistogram::ToJson() const {
  ordered_json bins = ordered_json::array();
  for (size_t i = 0; i < counts.size(); ++i)
    bins.push_back({{"left", origin + static_cast<double>(i) * bin_width},
                    {"count", counts[i]}});
  return {{"bin_width", bin_width}, {"mean", mean}, {"bins", bins},
          {"values", values}};
}

RtfReport BenchmarkRtf(Enhancer &model, const std::vector<Waveform> &files,
                       int warmup, double temperature) {
  if (files.empty()) Fail(ErrorKind::kConfig, "benchmark needs at least one file");
  for (int i = 0; i < warmup; ++i) Enhance(model, files[0], temperature, i);
  RtfReport r;
  r.files = static_cast<int>(files.size());
  r.device = "cpu, " + std::to_string(at::get_num_threads()) + " threads";
  r.param_count = ParameterCount(*model);
  const auto t0 = std::chrono::steady_clock::now();
  for (size_t i = 0; i < files.size(); ++i) {
    Enhance(model, files[i], temperature, i);
    r.audio_seconds += files[i].Seconds();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.rtf = r.wall_seconds / r.audio_seconds;
  return r;
}

ordered_json RtfReport::ToJson() const {
  return {{"files", files},         {"audio_seconds", audio_seconds},
          {"wall_seconds", wall_seconds}, {"rtf", rtf},
          {"device", device},       {"param_count", param_count}};
}

std::string NowIso8601() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace sefgan
