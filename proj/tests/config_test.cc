// tests/config_test.cc

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

#include <fstream>

#include "doctest.h"
#include "sefgan/config.h"
#include "sefgan/error.h"
#include "test_util.h"

namespace sefgan {
namespace {

using nlohmann::json;

ErrorKind KindOf(const json &j) {
  try {
    RunConfigFromJson(j);
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::kUsage;
}

TEST_CASE("empty overrides give the reference configuration") {
  RunConfig c = RunConfigFromJson(json::object());
  const auto &f = c.model.flow;
  CHECK(f.n_blocks == 20);
  CHECK(f.squeeze_factor == 12);
  CHECK(f.subnet_layers == 8);
  CHECK(f.subnet_channels == 128);
  CHECK(f.cond_channels == 256);
  CHECK(c.model.cond.channel_growth == 24);
  CHECK(c.model.cond.kernel_size == 15);
  CHECK(c.model.cond.n_layers == 20);
  CHECK(c.model.disc.NumDiscriminators() == 8);
  const auto &t = c.train;
  CHECK(t.batch_size == 16);
  CHECK(t.nf_lr == 1e-3);
  CHECK(t.plateau_factor == 0.8);
  CHECK(t.plateau_patience == 10);
  CHECK(t.early_stop_patience == 40);
  CHECK(t.gan_epochs == 200);
  CHECK(t.g_lr == 5e-5);
  CHECK(t.d_lr == 2e-4);
  CHECK(t.gan_beta1 == 0.5);
  CHECK(t.gan_beta2 == 0.9);
  CHECK(t.lr_decay_gan == 0.8);
  CHECK(t.lambda_nll == 0.3);
  CHECK(t.loss.resolutions.size() == 3);
  CHECK(t.loss.resolutions[1].fft_size == 2048);
  CHECK(c.eval.temperature == 1.0);
  CHECK(c.data.segment_samples % f.squeeze_factor == 0);
}

TEST_CASE("json round trip") {
  RunConfig desk = DeskRunConfig();
  desk.train.stage = Stage::kHybrid;
  desk.train.hybrid_mode = HybridMode::kCombined;
  desk.model.cond.use_condnet = false;
  json j = ToJson(desk);
  RunConfig back = RunConfigFromJson(j);
  CHECK(json(ToJson(back)) == j);
}

TEST_CASE("unknown keys are rejected") {
  CHECK(KindOf({{"modle", json::object()}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"train", {{"lr", 0.1}}}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"model", {{"flow", {{"blocks", 3}}}}}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"train", {{"loss", {{"weights", 1}}}}}}) == ErrorKind::kConfig);
}

TEST_CASE("invalid values are rejected") {
  CHECK(KindOf({{"train", {{"nf_lr", -1.0}}}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"train", {{"stage", "warmup"}}}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"train", {{"gan_betas", {0.5}}}}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"data", {{"segment_samples", 16384}}}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"model", {{"cond", {{"n_layers", 12}}}}}}) == ErrorKind::kConfig);
  CHECK(KindOf({{"model", {{"flow", {{"early_output_channels", 3}}}}}}) ==
        ErrorKind::kConfig);
  CHECK(KindOf({{"train", {{"batch_size", "16"}}}}) == ErrorKind::kConfig);

  testing::TempDir dir("config");
  {
    std::ofstream(dir.path() / "bad.json") << "{ not json";
  }
  try {
    LoadRunConfig((dir.path() / "bad.json").string());
    FAIL("no error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kConfig);
  }
  try {
    LoadRunConfig((dir.path() / "missing.json").string());
    FAIL("no error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

TEST_CASE("model hash covers the model section only") {
  RunConfig a = DeskRunConfig(), b = DeskRunConfig();
  CHECK(ModelConfigHash(a.model) == ModelConfigHash(b.model));
  CHECK(ModelConfigHash(a.model).size() == 16);
  b.train.g_lr *= 2;
  b.data.segment_samples = 1200;
  CHECK(ModelConfigHash(a.model) == ModelConfigHash(b.model));
  b.model.flow.subnet_channels += 2;
  CHECK(ModelConfigHash(a.model) != ModelConfigHash(b.model));
  // FNV-1a reference values.
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("early-output schedule arithmetic") {
  FlowConfig f;
  CHECK(f.ChannelsAtBlock(0) == 12);
  CHECK(f.ChannelsAtBlock(4) == 10);
  CHECK(f.ChannelsAtBlock(12) == 6);
  CHECK(f.ChannelsAtBlock(19) == 4);
  CHECK(f.FinalChannels() == 4);
  CHECK(!f.EmitsAfterBlock(19));
  f.early_output_every = 0;
  CHECK(f.FinalChannels() == 12);
}

TEST_CASE("shipped configs match the built-in settings") {
  const std::string dir = std::string(SEFGAN_SOURCE_DIR) + "/configs/";
  CHECK(json(ToJson(LoadRunConfig(dir + "desk.json"))) ==
        json(ToJson(DeskRunConfig(Stage::kNf))));
  CHECK(json(ToJson(LoadRunConfig(dir + "desk_adv.json"))) ==
        json(ToJson(DeskRunConfig(Stage::kGan))));
  CHECK(json(ToJson(LoadRunConfig(dir + "paper.json"))) == json(ToJson(RunConfig{})));
}

TEST_CASE("desk configuration is valid") {
  RunConfig c = DeskRunConfig();
  CHECK_NOTHROW(c.Validate());
  CHECK_NOTHROW(DeskRunConfig(Stage::kHybrid).Validate());
  CHECK(c.model.cond.n_layers == c.model.flow.n_blocks);
  CHECK(c.data.segment_samples % c.model.flow.squeeze_factor == 0);
}

}  // namespace
}  // namespace sefgan
