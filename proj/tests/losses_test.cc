// tests/losses_test.cc

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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sefgan/discriminators.h"
#include "sefgan/error.h"
#include "sefgan/losses.h"
#include "test_util.h"

namespace sefgan {
namespace {

const double kHalfLn2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Eight critics with constant scores and two constant feature maps each.
std::vector<DiscOutput> ConstOutputs(double score, double feature, int k = 8) {
  std::vector<DiscOutput> out(k);
  for (auto &o : out) {
    o.scores = torch::full({2, 5}, score, torch::kFloat64);
    o.features = {torch::full({2, 3, 7}, feature, torch::kFloat64),
                  torch::full({2, 4}, feature, torch::kFloat64)};
  }
  return out;
}

TEST_CASE("nll analytic values") {
  const int n = 48;
  auto z = torch::zeros({1, n});
  CHECK(NllLoss(z, torch::zeros({1})).item<double>() ==
        doctest::Approx(kHalfLn2Pi).epsilon(1e-12));
  CHECK(std::abs(NllLoss(z, torch::zeros({1})).item<double>() - 0.91894) < 1e-5);
  CHECK(NllLoss(z, torch::full({1}, double(n))).item<double>() ==
        doctest::Approx(kHalfLn2Pi - 1.0).epsilon(1e-12));
  CHECK(std::abs(NllLoss(z, torch::full({1}, double(n))).item<double>() + 0.08106) < 1e-5);

  auto r = torch::randn({3, n}, torch::kFloat64);
  auto quad = [&](const torch::Tensor &v) {
    return NllLoss(v, torch::zeros({3})) - kHalfLn2Pi;
  };
  CHECK(torch::allclose(quad(2.0 * r), 4.0 * quad(r), 1e-12, 0.0));
  CHECK_THROWS_AS(NllLoss(torch::full({1, 4}, NAN), torch::zeros({1})), Error);
}

TEST_CASE("least-squares adversarial terms") {
  auto one = torch::ones({4, 9});
  auto zero = torch::zeros({4, 9});
  auto half = torch::full({4, 9}, 0.5);
  CHECK(LsganLosses(one, zero).adv_d.item<double>() == 0.0);
  CHECK(LsganLosses(zero, one).adv_g.item<double>() == 0.0);
  auto h = LsganLosses(half, half);
  CHECK(h.adv_d.item<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h.adv_g.item<double>() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("feature matching") {
  auto a = ConstOutputs(0.0, 0.0);
  torch::manual_seed(1);
  for (auto &o : a)
    for (auto &f : o.features) f = torch::randn_like(f);
  CHECK(FeatureMatching(a, a).item<double>() == 0.0);

  auto b = a;
  for (auto &o : b)
    for (auto &f : o.features) f = f + 0.3;
  CHECK(FeatureMatching(a, b).item<double>() == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(FeatureMatching(a, b).item<double>() == FeatureMatching(b, a).item<double>());

  auto fewer = a;
  fewer.pop_back();
  CHECK_THROWS_AS(FeatureMatching(a, fewer), Error);
  auto shallow = a;
  shallow[3].features.pop_back();
  CHECK_THROWS_AS(FeatureMatching(a, shallow), Error);
}

TEST_CASE("mrstft matches a direct DFT") {
  const std::vector<testing::OracleRes> ores{{32, 8, 16}, {16, 4, 16}, {64, 16, 32}};
  std::vector<StftResolution> res;
  for (auto r : ores) res.push_back({r.fft, r.hop, r.win});
  torch::manual_seed(2);
  for (int n : {64, 128}) {
    auto ref = torch::randn({n}, torch::kFloat64);
    auto est = ref + 0.3 * torch::randn({n}, torch::kFloat64);
    std::vector<double> rv(ref.data_ptr<double>(), ref.data_ptr<double>() + n);
    std::vector<double> ev(est.data_ptr<double>(), est.data_ptr<double>() + n);
    const double got = MrStft(ref, est, res).item<double>();
    const double want = testing::OracleMrStft(rv, ev, ores, 1e-7);
    INFO("n = ", n, " got ", got, " want ", want);
    CHECK(std::abs(got - want) <= 1e-6);
  }
}

TEST_CASE("mrstft identities") {
  LossConfig cfg;
  torch::manual_seed(3);
  auto ref = torch::randn({2, 4800}, torch::kFloat64);
  CHECK(MrStft(ref, ref, cfg.resolutions).item<double>() == 0.0);
  auto terms = MrStftTerms(ref, torch::zeros_like(ref), cfg.resolutions);
  CHECK(terms.spectral_convergence.item<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(terms.log_magnitude.item<double>() > 0.0);
  try {
    MrStft(torch::zeros({4800}), ref[0], cfg.resolutions);
    FAIL("no error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kDegenerate);
  }
  CHECK_THROWS_AS(MrStft(ref, ref.narrow(1, 0, 100), cfg.resolutions), Error);
}

TEST_CASE("generator loss accounting") {
  LossConfig cfg;
  CHECK(cfg.lambda_fm == 2.0);
  CHECK(cfg.lambda_rec == 1.0);
  torch::manual_seed(4);
  auto ref = torch::randn({1, 2400}, torch::kFloat64);

  auto real = ConstOutputs(1.0, 0.2);
  auto at_optimum = GeneratorLoss(real, ConstOutputs(1.0, 0.2), ref, ref, cfg);
  CHECK(at_optimum.total.item<double>() == 0.0);

  auto est = ref + 0.1 * torch::randn_like(ref);
  auto rep = GeneratorLoss(real, ConstOutputs(0.5, 0.3), ref, est, cfg);
  double sum = 0.0;
  for (const auto &[k, v] : rep.components) sum += rep.weights.at(k) * v.item<double>();
  CHECK(std::abs(sum - rep.total.item<double>()) <= 1e-6);
  CHECK(rep.Value("adv_g") == doctest::Approx(8 * 0.25));
  CHECK(rep.Value("fm") == doctest::Approx(0.1));

  auto doubled = GeneratorLoss(real, ConstOutputs(0.5, 0.4), ref, est, cfg);
  CHECK(doubled.Value("fm") == doctest::Approx(2 * rep.Value("fm")).epsilon(1e-12));
  CHECK(doubled.Value("adv_g") == rep.Value("adv_g"));
  CHECK(doubled.Value("mrstft") == rep.Value("mrstft"));
  CHECK(doubled.total.item<double>() - rep.total.item<double>() ==
        doctest::Approx(cfg.lambda_fm * 0.1).epsilon(1e-9));
}

TEST_CASE("discriminator loss") {
  CHECK(DiscriminatorLoss(ConstOutputs(1.0, 0), ConstOutputs(0.0, 0)).item<double>() == 0.0);
  CHECK(DiscriminatorLoss(ConstOutputs(0.5, 0), ConstOutputs(0.5, 0)).item<double>() ==
        doctest::Approx(4.0).epsilon(1e-12));
  auto real = ConstOutputs(0, 0), fake = ConstOutputs(0, 0);
  torch::manual_seed(5);
  for (int k = 0; k < 8; ++k) {
    real[k].scores = torch::rand({2, 5}, torch::kFloat64);
    fake[k].scores = torch::rand({2, 5}, torch::kFloat64);
  }
  auto forward = DiscriminatorLoss(real, fake).item<double>();
  std::reverse(real.begin(), real.end());
  std::reverse(fake.begin(), fake.end());
  CHECK(DiscriminatorLoss(real, fake).item<double>() == doctest::Approx(forward).epsilon(1e-12));
  fake.pop_back();
  try {
    DiscriminatorLoss(real, fake);
    FAIL("no error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kConfig);
  }
}

TEST_CASE("hybrid loss") {
  LossReport g;
  g.total = torch::tensor(1.0, torch::kFloat64);
  auto nll = torch::tensor(2.0, torch::kFloat64);
  CHECK(HybridLoss(g, nll, 0.0).item<double>() == 1.0);
  CHECK(HybridLoss(g, nll, 0.3).item<double>() == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(TrainConfig{}.lambda_nll == 0.3);
}

TEST_CASE("losses are non-negative where expected") {
  torch::manual_seed(6);
  LossConfig cfg;
  for (int i = 0; i < 5; ++i) {
    auto ref = torch::randn({1, 2400});
    auto est = torch::randn({1, 2400});
    CHECK(MrStft(ref, est, cfg.resolutions).item<double>() >= 0.0);
    auto r = torch::randn({3, 4}), f = torch::randn({3, 4});
    auto adv = LsganLosses(r, f);
    CHECK(adv.adv_d.item<double>() >= 0.0);
    CHECK(adv.adv_g.item<double>() >= 0.0);
  }
}

}  // namespace
}  // namespace sefgan
